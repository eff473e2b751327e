"""Exact dense linear algebra over Z_p.

Matrices are 2-D ``int64`` numpy arrays with entries in [0, p).  Vectors act
on the left (row vectors) unless a function says otherwise; this matches the
``a L b^t`` convention used for pencils.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from heisquot._validation import check_matrix, check_square
from heisquot.ff import (
    poly_divmod,
    poly_gcd,
    poly_irreducible,
    poly_mul,
    poly_trim,
)

__all__ = [
    "Subspace",
    "companion_std",
    "frobenius_normal_form",
    "identity",
    "inverse",
    "is_invertible",
    "local_min_poly",
    "min_poly",
    "nullspace",
    "poly_irreducible",
    "poly_of_matrix",
    "rank",
    "rational_form",
    "rref",
    "solve_linear",
]


def identity(n):
    return np.eye(n, dtype=np.int64)


def all_vectors(p, n):
    """Every vector of Z_p^n as rows, in lexicographic order."""
    idx = np.arange(p**n, dtype=np.int64)
    cols = [(idx // p**i) % p for i in range(n - 1, -1, -1)]
    return np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64)


def matmul(*mats, p):
    out = mats[0]
    for m in mats[1:]:
        out = out @ m % p
    return out % p


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=np.int64)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def rref(m, p):
    """Reduced row echelon form.

    Returns ``(R, rank, pivots)``; ``R`` keeps the input shape, with the zero
    rows at the bottom.
    """
    a = check_matrix(m, p).copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, tuple(pivots)


def rank(m, p):
    return rref(m, p)[1]


def nullspace(m, p):
    """Rows spanning {x : m @ x = 0} (right kernel), in canonical order."""
    a = check_matrix(m, p)
    ncols = a.shape[1]
    R, r, piv = rref(a, p)
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = -R[i, f] % p
    return basis


def left_nullspace(m, p):
    """Rows spanning {x : x @ m = 0}."""
    return nullspace(check_matrix(m, p).T, p)


def is_invertible(m, p):
    a = check_matrix(m, p)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def inverse(m, p):
    a = check_square(m, p)
    n = a.shape[0]
    R, r, _ = rref(np.hstack([a, identity(n)]), p)
    if r < n or not np.array_equal(R[:, :n], identity(n)):
        raise ValueError("matrix is singular")
    return R[:, n:].copy()


def solve_linear(coeff, rhs, p):
    """Solve ``coeff @ x = rhs``.

    ``rhs`` may be a vector or a matrix of right-hand columns.  Returns
    ``(x, kernel)`` where ``x`` is a particular solution (free variables set to
    zero) or ``None`` when the system is inconsistent, and ``kernel`` is the
    :class:`Subspace` of homogeneous solutions.
    """
    A = check_matrix(coeff, p, name="coeff")
    b = np.asarray(rhs, dtype=np.int64) % p
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"rhs has {B.shape[0]} rows, coefficient matrix has {A.shape[0]}")
    n = A.shape[1]
    kernel = Subspace.from_rows(nullspace(A, p), p, n)
    R, r, piv = rref(np.hstack([A, B]), p)
    if any(c >= n for c in piv):
        return None, kernel
    x = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n:]
    return (x[:, 0] if vec else x), kernel


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of Z_p^n stored by its canonical RREF basis.

    Equality, hashing and ordering all go through the RREF rows, so equal
    subspaces compare equal and sort lexicographically by flattened basis.
    """

    p: int
    n: int
    rows: tuple

    @classmethod
    def from_rows(cls, vectors, p, n=None):
        a = np.asarray(vectors, dtype=np.int64)
        if n is None:
            n = a.shape[-1]
        a = a.reshape(-1, n) % p
        R, r, _ = rref(a, p)
        return cls(p, n, tuple(tuple(int(x) for x in row) for row in R[:r]))

    @classmethod
    def zero(cls, p, n):
        return cls(p, n, ())

    @classmethod
    def full(cls, p, n):
        return cls.from_rows(identity(n), p, n)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def codim(self):
        return self.n - self.dim

    @property
    def matrix(self):
        return np.array(self.rows, dtype=np.int64).reshape(self.dim, self.n)

    @property
    def key(self):
        return tuple(x for row in self.rows for x in row)

    @property
    def pivots(self):
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.rows)

    def contains(self, v):
        v = np.asarray(v, dtype=np.int64).reshape(-1, self.n) % self.p
        if self.dim == 0:
            return not v.any()
        return rank(np.vstack([self.matrix, v]), self.p) == self.dim

    def __contains__(self, v):
        return self.contains(v)

    def image(self, T):
        """Image under the row-vector map x -> x @ T."""
        T = np.asarray(T, dtype=np.int64)
        return Subspace.from_rows(self.matrix @ T % self.p, self.p, T.shape[1])

    def __add__(self, other):
        return Subspace.from_rows(np.vstack([self.matrix, other.matrix]), self.p, self.n)

    def intersect(self, other):
        # x = u A = w B  <=>  (u, w) in left kernel of [A; -B]
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.p, self.n)
        stacked = np.vstack([self.matrix, -other.matrix % self.p])
        coeffs = left_nullspace(stacked, self.p)[:, : self.dim]
        return Subspace.from_rows(coeffs @ self.matrix % self.p, self.p, self.n)

    def annihilator(self):
        """Column-check matrix K (n x codim) with ``v in self <=> v @ K == 0``."""
        if self.dim == 0:
            return identity(self.n)
        return nullspace(self.matrix, self.p).T.copy()

    def __str__(self):
        return ";".join(",".join(str(x) for x in row) for row in self.rows)


# -- polynomials of matrices --------------------------------------------------


def poly_of_matrix(a, m, p):
    """Evaluate the polynomial ``a`` (lowest first) at the square matrix m."""
    m = check_square(m, p)
    out = np.zeros_like(m)
    for c in reversed(a):
        out = (out @ m + c * identity(m.shape[0])) % p
    return out


def min_poly(m, p):
    """Monic minimal polynomial via the Krylov sequence I, m, m^2, ..."""
    m = check_square(m, p)
    n = m.shape[0]
    powers = [identity(n).ravel()]
    cur = identity(n)
    for k in range(1, n + 1):
        cur = cur @ m % p
        A = np.stack(powers, axis=1)
        x, _ = solve_linear(A, cur.ravel(), p)
        if x is not None:
            return poly_trim([-c for c in x] + [1], p)
        powers.append(cur.ravel())
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def _krylov(v, m, d, p):
    rows = [np.asarray(v, dtype=np.int64) % p]
    for _ in range(d - 1):
        rows.append(rows[-1] @ m % p)
    return np.array(rows, dtype=np.int64).reshape(d, m.shape[0])


def local_min_poly(v, m, p):
    """Monic least-degree a with v @ a(m) = 0."""
    v = np.asarray(v, dtype=np.int64) % p
    if not v.any():
        return (1,)
    rows = [v]
    while True:
        nxt = rows[-1] @ m % p
        x, _ = solve_linear(np.stack(rows, axis=1), nxt, p)
        if x is not None:
            return poly_trim([-c for c in x] + [1], p)
        rows.append(nxt)


def companion_std(a, p):
    """Companion matrix with ones on the superdiagonal and last row -a_0..-a_{e-1}.

    Its minimal polynomial is ``a``; as a row-vector operator it sends e_i to
    e_{i+1}.
    """
    a = poly_trim(a, p)
    if len(a) < 2:
        raise ValueError("companion matrix needs degree >= 1")
    if a[-1] != 1:
        raise ValueError("companion matrix needs a monic polynomial")
    e = len(a) - 1
    C = np.zeros((e, e), dtype=np.int64)
    for i in range(e - 1):
        C[i, i + 1] = 1
    C[e - 1] = [(-c) % p for c in a[:e]]
    return C


def _coprime_split(a, b, p):
    """Divisors a1 | a, b1 | b with gcd(a1, b1) = 1 and a1 * b1 = lcm(a, b)."""
    g = poly_gcd(a, b, p)
    a1 = poly_divmod(a, g, p)[0]
    b1 = b
    while True:
        h = poly_gcd(a1, b1, p)
        if h == (1,):
            return a1, b1
        a1 = poly_mul(a1, h, p)
        b1 = poly_divmod(b1, h, p)[0]


def _maximal_vector(m, p):
    """A vector whose local minimal polynomial equals min_poly(m)."""
    n = m.shape[0]
    v = identity(n)[0]
    mu = local_min_poly(v, m, p)
    for i in range(1, n):
        w = identity(n)[i]
        nu = local_min_poly(w, m, p)
        if not poly_divmod(mu, nu, p)[1]:
            continue
        a1, b1 = _coprime_split(mu, nu, p)
        v = (
            v @ poly_of_matrix(poly_divmod(mu, a1, p)[0], m, p)
            + w @ poly_of_matrix(poly_divmod(nu, b1, p)[0], m, p)
        ) % p
        mu = poly_mul(a1, b1, p)
    return v, mu


def frobenius_normal_form(m, p):
    """Rational canonical form.

    Returns ``(X, factors)`` with ``inverse(X) @ m @ X`` equal to the block sum
    of ``companion_std(f)`` over ``factors``, and each factor dividing the
    next.  Deterministic: the cyclic vectors come from merging standard basis
    vectors, the complements from a dual functional.
    """
    m = check_square(m, p)
    n = m.shape[0]
    if n == 0:
        return identity(0), []
    blocks = []
    basis = identity(n)
    cur = m
    while basis.shape[0]:
        k = cur.shape[0]
        v, mu = _maximal_vector(cur, p)
        d = len(mu) - 1
        K = _krylov(v, cur, d, p)
        target = np.zeros(d, dtype=np.int64)
        target[-1] = 1
        phi, _ = solve_linear(K, target, p)
        cols = [phi]
        for _ in range(d - 1):
            cols.append(cur @ cols[-1] % p)
        comp = left_nullspace(np.stack(cols, axis=1), p)
        blocks.append((mu, K @ basis % p))
        if comp.shape[0]:
            sol, _ = solve_linear(comp.T, (comp @ cur % p).T, p)
            cur = sol.T.copy()
        else:
            cur = np.zeros((0, 0), dtype=np.int64)
        basis = comp @ basis % p
        assert cur.shape[0] == k - d
    blocks.reverse()
    Z = np.vstack([b for _, b in blocks])
    return inverse(Z, p), [f for f, _ in blocks]


def rational_form(factors, p):
    return block_diag([companion_std(f, p) for f in factors])
