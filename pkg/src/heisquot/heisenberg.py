"""The Heisenberg group H(F_q) and its codimension-2 central quotients.

H(F_q) is presented as the Brahana group on the structure matrices of F_q,
with the coordinate identifications (a, b, c) <-> (alpha, beta, gamma) taken
on the basis 1, w, ..., w^(e-1).  The family G_{p,e} consists of the
quotients H/N with N a codimension-2 subspace of H' = F_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from heisquot._validation import is_prime
from heisquot.brahana import GroupMap, LinearMap, Pencil, combine
from heisquot.ff import FqField
from heisquot.linal import Subspace, block_diag, identity, inverse, is_invertible
from heisquot.tensoradj import is_heisenberg_quotient


@dataclass(frozen=True)
class HeisenbergCtx:
    field: FqField
    pencil: Pencil

    @property
    def p(self):
        return self.field.p

    @property
    def e(self):
        return self.field.e


def build(field):
    return HeisenbergCtx(field, Pencil(field.struct_mats, field.p))


def field_multiply(field, x, y):
    """Product of upper unitriangular matrices (alpha, beta, gamma), by field arithmetic.

    Independent of the structure matrices: uses polynomial multiplication in F_q.
    """
    e = field.e
    x, y = np.asarray(x), np.asarray(y)
    al, be, ga = x[:e], x[e : 2 * e], x[2 * e :]
    al2, be2, ga2 = y[:e], y[e : 2 * e], y[2 * e :]
    return np.concatenate(
        [field.add(al, al2), field.add(be, be2), field.add(field.add(ga, ga2), field.mul(al, be2))]
    )


def unitriangular(field, x):
    """The 3 x 3 matrix over F_q (entries as coordinate vectors) of a triple."""
    e = field.e
    z, one = field.zero(), field.one()
    al, be, ga = x[:e], x[e : 2 * e], x[2 * e :]
    return [[one, al, ga], [z, one, be], [z, z, one]]


# -- the family ---------------------------------------------------------------


def codim2_count(p, e):
    return (p**e - 1) * (p**e - p) // ((p**2 - 1) * (p**2 - p))


def enum_codim2(field):
    """All codimension-2 subspaces of Z_p^e, sorted by flattened RREF basis."""
    p, e = field.p, field.e
    if e < 2:
        raise ValueError("codimension-2 subspaces need e >= 2")
    k = e - 2
    out = []
    for piv in combinations(range(e), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, e) if j not in piv]
        for vals in product(range(p), repeat=len(free)):
            M = np.zeros((k, e), dtype=np.int64)
            for i, c in enumerate(piv):
                M[i, c] = 1
            for (i, j), v in zip(free, vals):
                M[i, j] = v
            out.append(Subspace(p, e, tuple(tuple(int(x) for x in row) for row in M)))
    out.sort()
    return out


def quotient_projection(N):
    """Projection F_q -> Z_p^2 with kernel N, onto the two non-pivot coordinates.

    Returns ``(P, complement)``: ``x @ P`` is the image, and ``complement`` the
    pair of coordinate indices whose unit vectors map to the standard basis.
    """
    if N.codim != 2:
        raise ValueError(f"expected a codimension-2 subspace, got codimension {N.codim}")
    p, e = N.p, N.n
    piv = N.pivots
    comp = tuple(j for j in range(e) if j not in piv)
    P = np.zeros((e, 2), dtype=np.int64)
    M = N.matrix
    for m, j in enumerate(comp):
        P[j, m] = 1
        for i, c in enumerate(piv):
            P[c, m] = -M[i, j] % p
    return P, comp


@dataclass
class FamilyMember:
    N: Subspace
    complement: tuple
    projection: np.ndarray  # e x 2
    raw: Pencil  # (L_1, L_2) with L_m = pi_m(w^i w^j)
    quotient_map: LinearMap  # H -> B(raw), kernel N
    pencil2: Pencil  # (I_e, C(a))
    a: tuple
    normalize: object  # isomorphism B(raw) -> B(pencil2)

    def record(self):
        return {"N": [list(r) for r in self.N.rows], "a": list(self.a)}


def quotient_pencil(ctx, N):
    if not is_prime(ctx.e):
        # for composite e a quotient can present a proper subfield; no (I, C(a)) form
        raise ValueError(f"the family needs prime e, got e = {ctx.e}")
    P, comp = quotient_projection(N)
    raw, qmap = combine(ctx.pencil, P.T)
    res = is_heisenberg_quotient(raw, ctx.e)
    if not res.ok:
        raise RuntimeError(f"quotient by {N} failed the genus-2 criterion: {res.reason}")
    return FamilyMember(N, comp, P, raw, qmap, res.pencil, res.min_poly, res.iso)


# -- semilinear maps of F_q -------------------------------------------------------


@dataclass(frozen=True)
class GammaElem:
    """x -> frob^k(lam * x) on F_q."""

    lam: tuple
    k: int

    def matrix(self, field):
        lam = field.elem(self.lam)
        if field.is_zero(lam):
            raise ValueError("lambda must be nonzero")
        return field.mul_matrix(lam) @ np.linalg.matrix_power(field.frobenius_matrix, self.k) % field.p

    def apply(self, field, x):
        return np.asarray(x) @ self.matrix(field) % field.p

    def act(self, field, N):
        return N.image(self.matrix(field))

    def compose(self, field, other):
        """self then other: x -> other(self(x))."""
        lam2 = field.elem(other.lam)
        pulled = field.pow(lam2, field.p ** ((field.e - self.k) % field.e))
        lam = field.mul(field.elem(self.lam), pulled)
        return GammaElem(tuple(int(v) for v in lam), (self.k + other.k) % field.e)


def gamma_group(field):
    """All e (p^e - 1) semilinear maps, ordered by (k, encoding of lambda)."""
    els = field.elements()[1:]
    return [GammaElem(tuple(int(v) for v in lam), k) for k in range(field.e) for lam in els]


def gamma_matrices(field):
    R = np.stack([field.mul_matrix(lam) for lam in field.elements()[1:]])
    out = []
    Fk = identity(field.e)
    for _ in range(field.e):
        out.append(R @ Fk % field.p)
        Fk = Fk @ field.frobenius_matrix % field.p
    return np.concatenate(out)


# -- automorphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class AutElem:
    """Constituents of an automorphism of H: additive tau, a 2 x 2 matrix over F_q, Frobenius power."""

    tau: np.ndarray  # (2e, e) over Z_p
    mat2: np.ndarray  # (2, 2, e): entries alpha, beta / gamma, delta
    k: int

    @classmethod
    def random(cls, field, rng, det_one=False, k=None):
        rng = np.random.default_rng(rng)
        e, p = field.e, field.p
        while True:
            m = rng.integers(0, p, size=(2, 2, e))
            d = det2(field, m)
            if not field.is_zero(d):
                break
        if det_one:
            m[1, 0] = field.mul(m[1, 0], field.inv(d))
            m[1, 1] = field.mul(m[1, 1], field.inv(d))
        tau = rng.integers(0, p, size=(2 * e, e))
        kk = int(rng.integers(0, e)) if k is None else k
        return cls(tau, m, kk)

    @classmethod
    def diagonal(cls, field, lam, k=0):
        e = field.e
        m = np.zeros((2, 2, e), dtype=np.int64)
        m[0, 0] = field.elem(lam)
        m[1, 1] = field.one()
        return cls(np.zeros((2 * e, e), dtype=np.int64), m, k)

    @classmethod
    def identity(cls, field):
        return cls.diagonal(field, field.one())

    def gamma(self, field):
        return GammaElem(tuple(int(v) for v in det2(field, self.mat2)), self.k)

    def abelian_matrix(self, field):
        """Induced map on H/H' = Z_p^(2e): (a, b) -> (a, b) @ T."""
        R = [[field.mul_matrix(self.mat2[i, j]) for j in range(2)] for i in range(2)]
        Fk = np.linalg.matrix_power(field.frobenius_matrix, self.k)
        return np.block([[R[0][0], R[0][1]], [R[1][0], R[1][1]]]) @ block_diag([Fk, Fk]) % field.p


def det2(field, m):
    return field.sub(field.mul(m[0, 0], m[1, 1]), field.mul(m[0, 1], m[1, 0]))


def aut_apply(ctx, phi, x):
    """Apply the automorphism with constituents ``phi`` to elements of H.

    The formula

        (a', b', c') -> frob(a' al + b' ga, a' be + b' de, det * c' + tau(a', b'))

    is multiplicative in symmetric coordinates, where the central coordinate
    is c - (a b) / 2; elements are converted there and back.
    """
    field, P = ctx.field, ctx.pencil
    p, e = field.p, field.e
    if p == 2:
        raise ValueError("automorphism formula needs p > 2")
    half = pow(2, -1, p)
    x = np.asarray(x, dtype=np.int64)
    a, b, c = P.split(x)
    c_sym = (c - half * P.pairing(a, b)) % p
    T = phi.abelian_matrix(field)
    Fk = np.linalg.matrix_power(field.frobenius_matrix, phi.k) % p
    D = field.mul_matrix(det2(field, phi.mat2)) @ Fk % p
    ab = np.concatenate([a, b], axis=-1) @ T % p
    a2, b2 = ab[..., :e], ab[..., e:]
    c2_sym = (c_sym @ D + np.concatenate([a, b], axis=-1) @ phi.tau @ Fk) % p
    c2 = (c2_sym + half * P.pairing(a2, b2)) % p
    return P.join(a2, b2, c2)


def aut_map(ctx, phi):
    return GroupMap(ctx.pencil, ctx.pencil, lambda x: aut_apply(ctx, phi, x))


def lift_to_quotient(ctx, phi, m1, m2):
    """Map B(m1.raw) -> B(m2.raw) induced by an automorphism sending N1 onto N2."""
    field = ctx.field
    G = phi.gamma(field).matrix(field)
    if m1.N.image(G) != m2.N:
        raise ValueError("automorphism does not carry N1 onto N2")
    e = ctx.e
    section = np.zeros((2, e), dtype=np.int64)
    for m, j in enumerate(m1.complement):
        section[m, j] = 1

    def f(x):
        a, b, d = m1.raw.split(x)
        y = aut_apply(ctx, phi, ctx.pencil.join(a, b, d @ section))
        ya, yb, yc = ctx.pencil.split(y)
        return m2.raw.join(ya, yb, yc @ m2.projection)

    return GroupMap(m1.raw, m2.raw, f)


def hyperplane_key(f, p):
    """Normalise a nonzero functional so its first nonzero entry is 1."""
    f = np.asarray(f, dtype=np.int64) % p
    lead = f[np.flatnonzero(f)[0]]
    return tuple(int(v) for v in f * pow(int(lead), -1, p) % p)


def hyperplane_orbit(start, mats, p):
    """Orbit of the hyperplane ker(start) under u -> u @ T for T in ``mats``."""
    invs = [inverse(T, p) for T in mats]
    seen = {hyperplane_key(start, p)}
    todo = [np.array(next(iter(seen)))]
    while todo:
        f = todo.pop()
        for Ti in invs:
            key = hyperplane_key(Ti @ f % p, p)
            if key not in seen:
                seen.add(key)
                todo.append(np.array(key))
    return seen


def hyperplane_count(p, n):
    return (p**n - 1) // (p - 1)


def check_invertible_combinations(P):
    """True when every nonzero lam_1 L_1 + lam_2 L_2 is invertible."""
    p = P.p
    for lam in product(range(p), repeat=P.g):
        if any(lam):
            L = np.tensordot(np.array(lam, dtype=np.int64), P.mats, axes=1) % p
            if not is_invertible(L, p):
                return False
    return True
