"""Isomorphism testing and classification within the family G_{p,e}.

H/N1 and H/N2 are isomorphic exactly when some semilinear map x -> frob^k(lam x)
carries N1 onto N2.  The test here searches that group exhaustively; it has
e (p^e - 1) elements, so this is cheap at the sizes we run.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from heisquot.brahana import LinearMap
from heisquot.ff import FqField
from heisquot.heisenberg import (
    build,
    GammaElem,
    enum_codim2,
    gamma_group,
    gamma_matrices,
    quotient_pencil,
)
from heisquot.linal import block_diag, inverse
from heisquot.tensoradj import adjoint_algebra

log = logging.getLogger(__name__)

SCALE_LIMIT = 2**20


class ScaleError(RuntimeError):
    pass


@dataclass
class IsoCertificate:
    gamma: GammaElem
    map: LinearMap  # B(m1.raw) -> B(m2.raw)
    source: object
    target: object

    def record(self):
        return {"lambda": list(self.gamma.lam), "k": self.gamma.k}


def _first_gamma(field, N1, N2):
    p = field.p
    if N1.dim != N2.dim:
        return None
    mats = gamma_matrices(field)
    K = N2.annihilator()
    hits = ~((N1.matrix @ mats @ K) % p).any(axis=(-2, -1))
    idx = np.flatnonzero(hits)
    if not len(idx):
        return None
    return gamma_group(field)[int(idx[0])]


def lifted_map(ctx, gamma, m1, m2):
    """The isomorphism B(m1.raw) -> B(m2.raw) induced by x -> frob^k(lam x).

    It comes from the automorphism of H with matrix diag(lam, 1), no additive
    part, which is linear in these coordinates: (a, b, d) -> (a G, b Fr^k, d S G P).
    """
    field = ctx.field
    G = gamma.matrix(field)
    Fk = np.linalg.matrix_power(field.frobenius_matrix, gamma.k) % field.p
    S = np.zeros((2, ctx.e), dtype=np.int64)
    for m, j in enumerate(m1.complement):
        S[m, j] = 1
    C = S @ G @ m2.projection % field.p
    return LinearMap(m1.raw, m2.raw, block_diag([G, Fk, C]))


def iso_test(ctx, N1, N2):
    """An IsoCertificate for H/N1 ~= H/N2, or None when they are not isomorphic."""
    for N in (N1, N2):
        if N.codim != 2 or N.n != ctx.e:
            raise ValueError(f"{N} is not a codimension-2 subspace of Z_{ctx.p}^{ctx.e}")
    gamma = _first_gamma(ctx.field, N1, N2)
    if gamma is None:
        return None
    m1, m2 = quotient_pencil(ctx, N1), quotient_pencil(ctx, N2)
    return IsoCertificate(gamma, lifted_map(ctx, gamma, m1, m2), m1, m2)


def verify_certificate(ctx, cert, rng=0, n_random=500):
    """Independent check: homomorphism, bijection, and conjugation of adjoint algebras."""
    src, dst = cert.map.source, cert.map.target
    p = src.p
    # generator pairs first, then random pairs
    gens = np.eye(src.dim, dtype=np.int64)
    xs = np.repeat(gens, src.dim, axis=0)
    ys = np.tile(gens, (src.dim, 1))
    if cert.map.homomorphism_failures(xs, ys):
        return False
    if not cert.map.is_homomorphism(pairs="random", rng=rng, n=n_random):
        return False
    if not cert.map.is_bijective():
        return False
    n = src.r + src.s
    T = cert.map.matrix[:n, :n]
    Ti = inverse(T, p)
    A1, A2 = adjoint_algebra(src), adjoint_algebra(dst)
    if A1.dim != A2.dim:
        return False
    return all(A2.is_adjoint((Ti @ F @ T % p, Ti @ Fs @ T % p)) for F, Fs in A1.basis)


# -- orbits -----------------------------------------------------------------------


def _generator_mats(field):
    """Matrices of x -> w0 x (w0 primitive) and of Frobenius; together they generate Gamma."""
    return [field.mul_matrix(field.primitive_element), field.frobenius_matrix]


def _orbit_labels(subs, field):
    index = {N: i for i, N in enumerate(subs)}
    perms = [np.array([index[N.image(G)] for N in subs]) for G in _generator_mats(field)]
    labels = np.full(len(subs), -1)
    for start in range(len(subs)):
        if labels[start] >= 0:
            continue
        orbit, todo = {start}, [start]
        while todo:
            i = todo.pop()
            for perm in perms:
                j = int(perm[i])
                if j not in orbit:
                    orbit.add(j)
                    todo.append(j)
        labels[list(orbit)] = min(orbit)
    return labels


def canonical_label(ctx, N):
    """Least subspace (in RREF order) of the Gamma-orbit of N."""
    orbit, todo = {N}, [N]
    gens = _generator_mats(ctx.field)
    while todo:
        M = todo.pop()
        for G in gens:
            img = M.image(G)
            if img not in orbit:
                orbit.add(img)
                todo.append(img)
    return min(orbit)


def burnside_count(field, subs, workers=None):
    """Number of Gamma-orbits on ``subs`` by averaging fixed points."""
    p = field.p
    bases = np.stack([N.matrix for N in subs])
    annih = np.stack([N.annihilator() for N in subs])
    mats = gamma_matrices(field)

    def fixed(G):
        return int((~((bases @ G @ annih) % p).any(axis=(-2, -1))).sum())

    n = worker_count(workers)
    if n > 1:
        # numpy releases the GIL in the matmuls; the sum is order independent
        with ThreadPoolExecutor(n) as pool:
            total = sum(pool.map(fixed, mats))
    else:
        total = sum(fixed(G) for G in mats)
    count, rem = divmod(total, len(mats))
    if rem:
        raise AssertionError(f"fixed-point total {total} not divisible by |Gamma| = {len(mats)}")
    return count


@dataclass
class Classification:
    p: int
    e: int
    modulus: tuple
    subspaces: list
    labels: np.ndarray
    burnside: int
    members: dict  # representative index -> FamilyMember

    @property
    def class_count(self):
        return len(set(self.labels.tolist()))

    def orbits(self):
        reps, sizes = np.unique(self.labels, return_counts=True)
        return [(int(r), int(s)) for r, s in zip(reps, sizes)]

    def report(self):
        return {
            "p": self.p,
            "e": self.e,
            "modulus": list(self.modulus),
            "member_count": len(self.subspaces),
            "class_count": self.class_count,
            "burnside_count": self.burnside,
            "orbits": [
                {"label": str(self.subspaces[r]), "size": s, "a_coeffs": list(self.members[r].a)}
                for r, s in self.orbits()
            ],
        }


def check_scale(p, e, unsafe=False):
    if p**e > SCALE_LIMIT and not unsafe:
        raise ScaleError(f"p^e = {p**e} exceeds the 2^20 guard; pass unsafe to override")


def classify_family(p, e, seed=0, modulus=None, unsafe=False, workers=None):
    check_scale(p, e, unsafe)
    return classify_ctx(build(FqField.create(p, e, seed, modulus)), unsafe, workers)


def classify_ctx(ctx, unsafe=False, workers=None):
    check_scale(ctx.p, ctx.e, unsafe)
    subs = enum_codim2(ctx.field)
    log.info("classifying %d subspaces at p=%d e=%d", len(subs), ctx.p, ctx.e)
    labels = _orbit_labels(subs, ctx.field)
    members = {int(r): quotient_pencil(ctx, subs[r]) for r in np.unique(labels)}
    burnside = burnside_count(ctx.field, subs, workers)
    return Classification(ctx.p, ctx.e, ctx.field.modulus, subs, labels, burnside, members)


def worker_count(workers=None):
    if workers is not None:
        return max(1, int(workers))
    return max(1, int(os.environ.get("HEISQUOT_WORKERS", "1")))


def gamma_order(field):
    return field.e * (field.order - 1)

