"""Adjoint algebras, centralisers and tensor products over a set of adjoints.

Two bimaps come with every pencil:

* ``"commutation"`` (the default): the alternating map on Z_p^(r+s) given by
  the forms [[0, L_k], [-L_k^t, 0]].  This is the bimap of group
  commutation, and its adjoint algebra for H(F_q) is M_2(F_q).
* ``"bilinear"``: (u, v) -> (u L_k v^t)_k on Z_p^r x Z_p^s.

A pair (F, G) is an adjoint when (uF) o v = u o (vG) for all u, v, i.e.
F A_k = A_k G^t for each structure matrix A_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from heisquot.brahana import Pencil, combine, frobenius_normalize
from heisquot.ff import poly_irreducible
from heisquot.linal import Subspace, identity, inverse, is_invertible, min_poly, nullspace, rank


class TensorDecompositionError(ValueError):
    """Relations and fixed points of a pair set do not split the matrix space."""


def structure_forms(P, bimap="commutation"):
    if bimap == "commutation":
        return P.bracket_forms()
    if bimap == "bilinear":
        return P.mats
    raise ValueError(f"unknown bimap {bimap!r}")


def _adjoint_system(forms, p):
    """Coefficient matrix of F A_k - A_k G^t = 0 in the unknowns (vec F, vec G)."""
    g, n1, n2 = forms.shape
    blocks = []
    I1, I2 = identity(n1), identity(n2)
    for A in forms:
        # (F A)_{ij} = sum_l F_{il} A_{lj}
        left = np.einsum("ia,bj->ijab", I1, A).reshape(n1 * n2, n1 * n1)
        # (A G^t)_{ij} = sum_l A_{il} G_{jl}
        right = np.einsum("il,jb->ijbl", A, I2).reshape(n1 * n2, n2 * n2)
        blocks.append(np.hstack([left, -right]))
    if not blocks:
        return np.zeros((0, n1 * n1 + n2 * n2), dtype=np.int64)
    return np.vstack(blocks) % p


@dataclass
class AdjAlgebra:
    """Basis of adjoint pairs; a ring under (F, G)(F', G') = (F F', G' G)."""

    p: int
    forms: np.ndarray
    basis: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def shapes(self):
        return self.forms.shape[1], self.forms.shape[2]

    def flatten(self, pair):
        F, G = pair
        return np.concatenate([np.ravel(F), np.ravel(G)]) % self.p

    def unflatten(self, vec):
        n1, n2 = self.shapes
        vec = np.asarray(vec, dtype=np.int64) % self.p
        return vec[: n1 * n1].reshape(n1, n1), vec[n1 * n1 :].reshape(n2, n2)

    def as_subspace(self):
        n1, n2 = self.shapes
        rows = [self.flatten(b) for b in self.basis]
        return Subspace.from_rows(np.array(rows).reshape(-1, n1 * n1 + n2 * n2), self.p)

    def is_adjoint(self, pair):
        F, G = (np.asarray(x, dtype=np.int64) for x in pair)
        p = self.p
        return all(np.array_equal(F @ A % p, A @ G.T % p) for A in self.forms)

    def __contains__(self, pair):
        return self.is_adjoint(pair)

    def multiply(self, x, y):
        return x[0] @ y[0] % self.p, y[1] @ x[1] % self.p

    def center(self):
        """Basis of the centre of the ring."""
        p = self.p
        vecs = np.array([self.flatten(b) for b in self.basis])
        rows = []
        for w in self.basis:
            cols = [self.flatten(self.multiply(b, w)) - self.flatten(self.multiply(w, b)) for b in self.basis]
            rows.append(np.stack(cols, axis=1) % p)
        coeffs = nullspace(np.vstack(rows), p)
        return [self.unflatten(c @ vecs % p) for c in coeffs]

    def contains_identity(self):
        n1, n2 = self.shapes
        return self.is_adjoint((identity(n1), identity(n2)))


def adjoint_algebra(P, bimap="commutation"):
    """Solve the adjoint equations of ``P`` as one homogeneous system."""
    forms = structure_forms(P, bimap)
    p = P.p
    sol = nullspace(_adjoint_system(forms, p), p)
    alg = AdjAlgebra(p, forms)
    alg.basis = [alg.unflatten(v) for v in sol]
    return alg


def centralizer(L, p):
    """Basis of {F : F L = L F}."""
    L = np.asarray(L, dtype=np.int64) % p
    n = L.shape[0]
    eqs = (np.kron(identity(n), L.T) - np.kron(L, identity(n))) % p
    return [v.reshape(n, n) for v in nullspace(eqs, p)]


@dataclass
class TensorSpace:
    """M_{r x s} = <F^t X - X G> (+) {X : F^t X = X G} for pairs in A."""

    p: int
    r: int
    s: int
    relations: Subspace
    fixed: Subspace
    projector: np.ndarray  # (r*s, dim fixed): vec X -> coordinates in fixed.matrix

    def project(self, X):
        return np.ravel(X) @ self.projector % self.p

    def tensor(self, u, v):
        return self.project(np.outer(u, v))


def tensor_space(pairs, r, s, p):
    rs = r * s
    rel_rows, kernel_rows = [], []
    for F, G in pairs:
        F = np.asarray(F, dtype=np.int64) % p
        G = np.asarray(G, dtype=np.int64) % p
        if F.shape != (r, r) or G.shape != (s, s):
            raise ValueError(f"pair has shapes {F.shape}, {G.shape}; expected ({r}, {r}), ({s}, {s})")
        # vec(F^t X - X G) = M vec X, row-major vec
        M = (np.kron(F.T, identity(s)) - np.kron(identity(r), G.T)) % p
        rel_rows.append(M.T)
        kernel_rows.append(M)
    if pairs:
        relations = Subspace.from_rows(np.vstack(rel_rows), p, rs)
        fixed = Subspace.from_rows(nullspace(np.vstack(kernel_rows), p), p, rs)
    else:
        relations, fixed = Subspace.zero(p, rs), Subspace.full(p, rs)
    if relations.dim + fixed.dim != rs or (relations + fixed).dim != rs:
        raise TensorDecompositionError(
            f"relations (dim {relations.dim}) and fixed space (dim {fixed.dim}) "
            f"do not form a direct sum of the {rs}-dimensional matrix space"
        )
    change = np.vstack([relations.matrix, fixed.matrix])
    projector = inverse(change, p)[:, relations.dim :]
    return TensorSpace(p, r, s, relations, fixed, projector)


@dataclass
class FactorMap:
    """Linear map from the tensor space to Z_p^g with u o v = hat(u (x) v)."""

    space: TensorSpace
    matrix: np.ndarray  # (dim fixed, g)

    def __call__(self, t):
        return np.asarray(t) @ self.matrix % self.space.p

    def bimap(self, u, v):
        return self(self.space.tensor(u, v))


def factors_through(P, pairs, bimap="commutation"):
    """The factor map of P's bimap through the tensor over ``pairs``, or None."""
    forms = structure_forms(P, bimap)
    p = P.p
    _, n1, n2 = forms.shape
    space = tensor_space(pairs, n1, n2, p)
    functionals = forms.reshape(len(forms), -1).T % p  # vec X -> (X . A_k)_k
    if space.relations.dim and (space.relations.matrix @ functionals % p).any():
        return None
    return FactorMap(space, space.fixed.matrix @ functionals % p)


def pairs_are_adjoint(P, pairs, bimap="commutation"):
    forms = structure_forms(P, bimap)
    p = P.p
    return all(
        np.array_equal(np.asarray(F) @ A % p, A @ np.asarray(G).T % p) for F, G in pairs for A in forms
    )


@dataclass
class MembershipResult:
    ok: bool
    reason: str
    min_poly: tuple | None = None
    pencil: Pencil | None = None
    iso: object = None

    def __bool__(self):
        return self.ok


def is_heisenberg_quotient(P, e):
    """Decide whether a genus-2 pencil of e x e matrices presents some H/N.

    The criterion: some invertible member L of the span, with L' completing a
    basis, has L^-1 L' of irreducible minimal polynomial of degree e.  On
    success the result carries the normalised pencil (I_e, C(a)) and an
    isomorphism from B(P) onto it.
    """
    if P.g != 2:
        raise ValueError(f"membership test needs genus 2 input, got g = {P.g}")
    if P.r != e or P.s != e:
        raise ValueError(f"membership test needs {e} x {e} matrices, got {P.r} x {P.s}")
    p = P.p
    if P.genus != 2:
        return MembershipResult(False, "pencil matrices are linearly dependent")
    candidates = [((1, 0), (0, 1))] + [((lam, 1), (1, 0)) for lam in range(p)]
    for lead, other in candidates:
        A = np.array([lead, other], dtype=np.int64)
        L = (lead[0] * P.mats[0] + lead[1] * P.mats[1]) % p
        if not is_invertible(L, p):
            continue
        Q, to_Q = combine(P, A)
        a = min_poly(inverse(L, p) @ Q.mats[1] % p, p)
        if len(a) - 1 != e or not poly_irreducible(a, p):
            return MembershipResult(False, f"minimal polynomial {a} is not irreducible of degree {e}", a)
        N, to_N, factors = frobenius_normalize(Q)
        return MembershipResult(True, "ok", a, N, to_Q.then(to_N))
    return MembershipResult(False, "no invertible member in the pencil")


def scalar_pairs(r, s=None):
    """The pair set {(I_r, I_s)}."""
    return [(identity(r), identity(r if s is None else s))]


def all_combinations(P):
    """Every member sum_k lam_k L_k of the pencil's span (including zero)."""
    p = P.p
    for lam in product(range(p), repeat=P.g):
        yield lam, np.tensordot(np.array(lam, dtype=np.int64), P.mats, axes=1) % p


def rank_profile(P):
    return sorted(rank(L, P.p) for lam, L in all_combinations(P) if any(lam))
