"""Brahana groups B(L_1, ..., L_g) of class 2 and exponent p.

An element is stored as one integer vector ``x = (a | b | c)`` with
``a`` in Z_p^r, ``b`` in Z_p^s and ``c`` in Z_p^g.  Multiplying the block
matrices that define the group collapses to

    (a, b, c) (a', b', c') = (a + a', b + b', c + c' + (a L_k b'^t)_k),

so all arithmetic is done on these vectors.  Every operation accepts stacked
elements (any leading batch shape) and broadcasts.

Constructors that build new groups out of old ones (eliminations, linear
combinations, basis changes, embeddings) return the new pencil together with
an explicit map, so callers can check the map rather than trust it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from heisquot._validation import check_matrix, check_prime
from heisquot.linal import (
    Subspace,
    all_vectors,
    companion_std,
    frobenius_normal_form,
    identity,
    inverse,
    is_invertible,
    nullspace,
    rank,
)


class Pencil:
    """A tuple of g matrices of shape r x s over Z_p."""

    def __init__(self, mats, p, r=None, s=None):
        self.p = check_prime(p)
        m = np.asarray(mats, dtype=np.int64)
        if m.size == 0 and m.ndim < 3:
            if r is None or s is None:
                raise ValueError("an empty pencil needs explicit r and s")
            m = np.zeros((0, r, s), dtype=np.int64)
        if m.ndim == 2:
            m = m[None]
        if m.ndim != 3:
            raise ValueError(f"pencil matrices must stack to 3 dimensions, got {m.shape}")
        if r is not None and m.shape[1] != r or s is not None and m.shape[2] != s:
            raise ValueError(f"pencil matrices have shape {m.shape[1:]}, expected ({r}, {s})")
        self.mats = m % self.p
        self.mats.setflags(write=False)

    # shape
    @property
    def g(self):
        return self.mats.shape[0]

    @property
    def r(self):
        return self.mats.shape[1]

    @property
    def s(self):
        return self.mats.shape[2]

    @property
    def dim(self):
        return self.r + self.s + self.g

    @property
    def order(self):
        return self.p**self.dim

    def __len__(self):
        return self.g

    def __getitem__(self, k):
        return self.mats[k]

    def __eq__(self, other):
        return (
            isinstance(other, Pencil)
            and self.p == other.p
            and self.mats.shape == other.mats.shape
            and np.array_equal(self.mats, other.mats)
        )

    def __hash__(self):
        return hash((self.p, self.mats.shape, self.mats.tobytes()))

    def __repr__(self):
        return f"Pencil(p={self.p}, r={self.r}, s={self.s}, g={self.g})"

    @property
    def genus(self):
        """Dimension of the span of the matrices."""
        if self.g == 0:
            return 0
        return rank(self.mats.reshape(self.g, -1), self.p)

    @property
    def is_reduced(self):
        return self.genus == self.g

    # element helpers
    def split(self, x):
        x = np.asarray(x)
        r, s = self.r, self.s
        return x[..., :r], x[..., r : r + s], x[..., r + s :]

    def join(self, a, b, c):
        parts = [np.asarray(v, dtype=np.int64) for v in (a, b, c)]
        lead = np.broadcast_shapes(*(v.shape[:-1] for v in parts))
        parts = [np.broadcast_to(v, lead + v.shape[-1:]) for v in parts]
        return np.concatenate(parts, axis=-1) % self.p

    def identity(self):
        return np.zeros(self.dim, dtype=np.int64)

    def elements(self):
        """Every element as a (p^dim, dim) array."""
        return all_vectors(self.p, self.dim)

    def random_elements(self, rng, n):
        return rng.integers(0, self.p, size=(n, self.dim))

    def _check(self, x):
        x = np.asarray(x, dtype=np.int64)
        if x.shape[-1] != self.dim:
            raise ValueError(f"element has length {x.shape[-1]}, group needs {self.dim}")
        return x

    def pairing(self, a, b):
        """(a L_k b^t)_k for batches of a, b."""
        return np.einsum("...i,kij,...j->...k", a, self.mats, b) % self.p

    # group law
    def multiply(self, x, y):
        x, y = self._check(x), self._check(y)
        a, b, c = self.split(x)
        a2, b2, c2 = self.split(y)
        return self.join(a + a2, b + b2, c + c2 + self.pairing(a, b2))

    def inverse(self, x):
        a, b, c = self.split(self._check(x))
        return self.join(-a, -b, -c + self.pairing(a, b))

    def power(self, x, n):
        out = np.broadcast_to(self.identity(), np.shape(x)).copy()
        for _ in range(n):
            out = self.multiply(out, x)
        return out

    def commutator(self, x, y):
        """[x, y] = x^-1 y^-1 x y."""
        x, y = self._check(x), self._check(y)
        a, b, _ = self.split(x)
        a2, b2, _ = self.split(y)
        zero = np.zeros(np.broadcast_shapes(a.shape[:-1], a2.shape[:-1]) + (self.r + self.s,), dtype=np.int64)
        return np.concatenate([zero, (self.pairing(a, b2) - self.pairing(a2, b)) % self.p], axis=-1)

    def bracket_forms(self):
        """The alternating forms [[0, L_k], [-L_k^t, 0]] of the commutation map."""
        r, s, p = self.r, self.s, self.p
        out = np.zeros((self.g, r + s, r + s), dtype=np.int64)
        out[:, :r, r:] = self.mats
        out[:, r:, :r] = -np.transpose(self.mats, (0, 2, 1))
        return out % p

    def block_matrix(self, x):
        """The literal (1 + r + g)-square matrix representing x."""
        a, b, c = self.split(self._check(x))
        r, g = self.r, self.g
        M = identity(1 + r + g)
        M[0, 1 : 1 + r] = a
        M[0, 1 + r :] = c
        M[1 : 1 + r, 1 + r :] = np.stack([L @ b % self.p for L in self.mats], axis=1) if g else 0
        return M % self.p


# -- maps between groups ------------------------------------------------------


class GroupMap:
    """A map between Brahana groups given by a vectorised function."""

    def __init__(self, source, target, func):
        self.source = source
        self.target = target
        self._func = func

    def __call__(self, x):
        return np.asarray(self._func(np.asarray(x, dtype=np.int64)), dtype=np.int64) % self.target.p

    def then(self, other):
        if other.source != self.target:
            raise ValueError("maps do not compose: codomain and domain differ")
        return GroupMap(self.source, other.target, lambda x: other(self(x)))

    def homomorphism_failures(self, xs, ys):
        """Number of pairs (x, y) with f(xy) != f(x) f(y)."""
        lhs = self(self.source.multiply(xs, ys))
        rhs = self.target.multiply(self(xs), self(ys))
        return int(np.any(lhs != rhs, axis=-1).sum())

    def is_homomorphism(self, pairs="all", rng=None, n=2000):
        """Check f(xy) = f(x) f(y) on all pairs or on ``n`` random pairs."""
        src = self.source
        if pairs == "all":
            els = src.elements()
            for chunk in np.array_split(np.arange(len(els)), max(1, len(els) ** 2 // 400_000)):
                xs = els[chunk][:, None, :]
                if self.homomorphism_failures(xs, els[None, :, :]):
                    return False
            return True
        rng = np.random.default_rng(rng)
        return self.homomorphism_failures(src.random_elements(rng, n), src.random_elements(rng, n)) == 0

    def is_injective(self):
        els = self.source.elements()
        images = self(els)
        return len(np.unique(images, axis=0)) == len(els)


class LinearMap(GroupMap):
    """x -> x @ T; the usual shape of witnesses for Brahana constructions."""

    def __init__(self, source, target, matrix):
        T = np.asarray(matrix, dtype=np.int64) % source.p
        if T.shape != (source.dim, target.dim):
            raise ValueError(f"map matrix has shape {T.shape}, expected {(source.dim, target.dim)}")
        self.matrix = T
        super().__init__(source, target, lambda x: x @ T)

    def then(self, other):
        if isinstance(other, LinearMap):
            if other.source != self.target:
                raise ValueError("maps do not compose: codomain and domain differ")
            return LinearMap(self.source, other.target, self.matrix @ other.matrix % self.source.p)
        return super().then(other)

    def is_injective(self):
        return rank(self.matrix, self.source.p) == self.source.dim

    def is_bijective(self):
        return self.source.dim == self.target.dim and self.is_injective()


def _block(*blocks):
    from heisquot.linal import block_diag

    return block_diag([np.asarray(b, dtype=np.int64) for b in blocks])


# -- constructors -------------------------------------------------------------


def _keep(n, drop):
    drop = set(int(i) for i in drop)
    bad = [i for i in drop if not 0 <= i < n]
    if bad:
        raise IndexError(f"indices {bad} out of range for dimension {n}")
    return [i for i in range(n) if i not in drop]


def eliminate(P, drop_rows=(), drop_cols=(), drop_mats=()):
    """Subgroup with the listed a- and b-coordinates forced to zero.

    Returns ``(Q, inclusion)`` where ``inclusion`` maps B(Q) into B(P).  Matrix
    indices may only be dropped once they are zero after the row and column
    deletions; otherwise the subset would not be closed.
    """
    rows = _keep(P.r, drop_rows)
    cols = _keep(P.s, drop_cols)
    mats = _keep(P.g, drop_mats)
    cut = P.mats[:, rows][:, :, cols]
    for k in set(range(P.g)) - set(mats):
        if cut[k].any():
            raise ValueError(f"cannot drop matrix {k}: it is nonzero on the kept rows and columns")
    Q = Pencil(cut[mats], P.p, len(rows), len(cols))
    T = np.zeros((Q.dim, P.dim), dtype=np.int64)
    for i, j in enumerate(rows):
        T[i, j] = 1
    for i, j in enumerate(cols):
        T[Q.r + i, P.r + j] = 1
    for i, j in enumerate(mats):
        T[Q.r + Q.s + i, P.r + P.s + j] = 1
    return Q, LinearMap(Q, P, T)


def combine(P, A):
    """Quotient B(sum_j A_ij L_j); the surjection sends c to A c."""
    A = check_matrix(A, P.p, shape=(None, P.g), name="combination matrix")
    mats = np.einsum("ij,jrs->irs", A, P.mats) if A.shape[0] else np.zeros((0, P.r, P.s), dtype=np.int64)
    Q = Pencil(mats, P.p, P.r, P.s)
    return Q, LinearMap(P, Q, _block(identity(P.r + P.s), A.T))


def transform(P, X, Y):
    """Isomorphic presentation B(X L_k Y^t); the map is (a X^-1, b Y^-1, c)."""
    X = check_matrix(X, P.p, shape=(P.r, P.r), name="X")
    Y = check_matrix(Y, P.p, shape=(P.s, P.s), name="Y")
    if not (is_invertible(X, P.p) and is_invertible(Y, P.p)):
        raise ValueError("transform needs invertible X and Y")
    Q = Pencil(np.einsum("ij,kjl,ml->kim", X, P.mats, Y), P.p, P.r, P.s)
    return Q, LinearMap(P, Q, _block(inverse(X, P.p), inverse(Y, P.p), identity(P.g)))


def frobenius_normalize(P):
    """Rewrite (L_1, ..., L_g), L_1 invertible, as (I, C(a_1) + ... + C(a_m), ...).

    The remaining matrices become X^-1 L_1^-1 L_i X.  Returns
    ``(Q, iso, factors)``.
    """
    if P.g < 2 or P.r != P.s:
        raise ValueError("normalisation needs at least two square matrices")
    if not is_invertible(P.mats[0], P.p):
        raise ValueError("first pencil matrix must be invertible")
    p = P.p
    L1inv = inverse(P.mats[0], p)
    X, factors = frobenius_normal_form(L1inv @ P.mats[1] % p, p)
    Q, iso = transform(P, inverse(X, p) @ L1inv % p, X.T)
    return Q, iso, factors


def heisenberg_pencil(a, p):
    """(I_e, companion_std(a))."""
    C = companion_std(a, p)
    return Pencil(np.stack([identity(len(C)), C]), p)


def embed_step(b, a, p):
    """Embedding B(I_{e-1}, C(b)) -> B(I_e, C(a)) for deg b = deg a - 1.

    Composite of a column insertion, the basis change by Y (identity with the
    last row replaced by (c_0, ..., c_{e-2}, 1), where c is the last row of
    C(b)), and a row insertion.
    """
    small = heisenberg_pencil(b, p)
    big = heisenberg_pencil(a, p)
    f, e = small.r, big.r
    if e != f + 1:
        raise ValueError("embed_step needs deg a = deg b + 1")
    # strip the last row of (I_e, C(a)): the maximal subgroup M
    M, row_incl = eliminate(big, drop_rows=[e - 1])
    Y = identity(e)
    Y[e - 1, :f] = companion_std(b, p)[f - 1]
    # B(L Y) ~ B(L): transform M by (I, Y^t)
    MY, to_MY = transform(M, identity(f), Y.T)
    # dropping the inserted last column of M Y recovers (I_f, C(b))
    back, col_incl = eliminate(MY, drop_cols=[e - 1])
    assert back == small, "column deletion did not recover the smaller pencil"
    inv_to_MY = LinearMap(MY, M, inverse(to_MY.matrix, p))
    relabel = LinearMap(small, back, identity(small.dim))
    return relabel.then(col_incl).then(inv_to_MY).then(row_incl)


def embed_lower(b, a, p):
    """Injective homomorphism B(I_f, C(b)) -> B(I_e, C(a)) for deg b < deg a.

    Intermediate degrees go through t^k.
    """
    f, e = len(b) - 1, len(a) - 1
    if not 1 <= f < e:
        raise ValueError(f"need 1 <= deg b < deg a, got {f} and {e}")
    chain = [tuple(b)] + [(0,) * k + (1,) for k in range(f + 1, e)] + [tuple(a)]
    emb = embed_step(chain[0], chain[1], p)
    for lo, hi in zip(chain[1:], chain[2:]):
        emb = emb.then(embed_step(lo, hi, p))
    return emb


# -- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class GroupDescriptor:
    order: int
    min_generators: int
    frattini_index: int
    center_order: int
    derived_order: int
    exponent: int
    class_sizes: tuple  # ((size, number of classes), ...) over noncentral classes
    sampled: bool = False

    def as_fingerprint(self):
        return (
            self.order,
            self.min_generators,
            self.derived_order,
            self.center_order,
            self.exponent,
            self.class_sizes,
        )


def radical(P):
    """Subspace of (a, b) pairing trivially with everything under commutation."""
    n = P.r + P.s
    if P.g == 0:
        return Subspace.full(P.p, n)
    forms = P.bracket_forms()
    stacked = np.concatenate(list(forms), axis=1)
    return Subspace.from_rows(nullspace(stacked.T, P.p), P.p, n) if n else Subspace.zero(P.p, 0)


def class_size_counts(P, us=None):
    """Map class size -> number of elements (per u, times p^g) for the given u's."""
    p, g = P.p, P.g
    n = P.r + P.s
    if us is None:
        us = all_vectors(p, n)
    forms = P.bracket_forms()
    hits = np.zeros(len(us), dtype=np.int64)
    for lam in product(range(p), repeat=g):
        F = np.tensordot(np.array(lam, dtype=np.int64), forms, axes=1) % p if g else np.zeros((n, n), dtype=np.int64)
        hits += ~np.any(us @ F % p, axis=1)
    sizes = p**g // hits
    vals, counts = np.unique(sizes, return_counts=True)
    return {int(v): int(c) * p**g for v, c in zip(vals, counts)}


def descriptor(P, max_enum=3**12, rng=0):
    """Structural invariants from ranks, without enumerating the group."""
    p = P.p
    genus = P.genus
    d = P.dim - genus
    rad = radical(P)
    n = P.r + P.s
    if p**n <= max_enum:
        counts, sampled = class_size_counts(P), False
    else:
        us = np.random.default_rng(rng).integers(0, p, size=(4096, n))
        counts, sampled = class_size_counts(P, us), True
    # sampled runs only know which sizes occur, not how many classes have them
    classes = tuple(
        sorted((size, None if sampled else num // size) for size, num in counts.items() if size > 1)
    )
    return GroupDescriptor(
        order=P.order,
        min_generators=d,
        frattini_index=p**d,
        center_order=p ** (rad.dim + P.g),
        derived_order=p**genus,
        exponent=p if P.dim else 1,
        class_sizes=classes,
        sampled=sampled,
    )
