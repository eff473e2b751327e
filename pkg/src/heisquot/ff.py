"""Prime-field polynomials and the extension field F_{p^e}.

Polynomials are tuples of ints mod p, lowest degree first, with trailing
zeros stripped (the zero polynomial is ``()``).  Field elements are length-e
integer vectors on the basis 1, w, ..., w^(e-1), where w is a root of the
chosen modulus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from heisquot._validation import check_prime

Poly = tuple


# -- polynomials over Z_p ----------------------------------------------------


def poly_trim(a, p):
    a = [int(c) % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_degree(a):
    return len(a) - 1


def poly_add(a, b, p):
    n = max(len(a), len(b))
    return poly_trim(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p
    )


def poly_sub(a, b, p):
    return poly_add(a, tuple(-c for c in b), p)


def poly_scale(a, c, p):
    return poly_trim([c * x for x in a], p)


def poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out, p)


def poly_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * y) % p
    return poly_trim(q, p), poly_trim(a[:db], p)


def poly_mod(a, b, p):
    return poly_divmod(a, b, p)[1]


def poly_monic(a, p):
    if not a:
        return a
    return poly_scale(a, pow(a[-1], -1, p), p)


def poly_gcd(a, b, p):
    """Monic gcd (``()`` when both inputs are zero)."""
    a, b = poly_trim(a, p), poly_trim(b, p)
    while b:
        a, b = b, poly_mod(a, b, p)
    return poly_monic(a, p)


def poly_xgcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = poly_trim(a, p), poly_trim(b, p)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1, p), p)
    if not r0:
        return (), (), ()
    c = pow(r0[-1], -1, p)
    return poly_scale(r0, c, p), poly_scale(s0, c, p), poly_scale(t0, c, p)


def poly_powmod(a, n, m, p):
    result = (1,)
    base = poly_mod(a, m, p)
    while n:
        if n & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        n >>= 1
    return poly_mod(result, m, p)


def poly_eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def poly_irreducible(a, p):
    """Ben-Or test: a is irreducible iff gcd(a, t^(p^i) - t) = 1 for i <= deg/2."""
    a = poly_trim(a, p)
    d = poly_degree(a)
    if d < 1:
        raise ValueError("irreducibility is only defined for degree >= 1")
    a = poly_monic(a, p)
    t = (0, 1)
    x = t
    for _ in range(d // 2):
        x = poly_powmod(x, p, a, p)
        if poly_gcd(a, poly_sub(x, t, p), p) != (1,):
            return False
    return True


def monic_polys(p, degree):
    """All monic polynomials of the given degree, in increasing integer encoding."""
    for low in product(range(p), repeat=degree):
        yield tuple(reversed(low)) + (1,)


def find_irreducible(p, e, seed=0):
    """Least monic irreducible of degree e, scanning from offset ``seed``.

    Candidates are ordered by sum(a_i p^i) over the low coefficients; ``seed``
    rotates the scan start so that seed 0 gives the lexicographically least.
    """
    check_prime(p)
    if e < 1:
        raise ValueError(f"degree must be >= 1, got {e}")
    total = p**e
    for step in range(total):
        code = (seed + step) % total
        low = []
        for _ in range(e):
            code, r = divmod(code, p)
            low.append(r)
        cand = tuple(low) + (1,)
        if poly_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def poly_to_str(a):
    return ",".join(str(c) for c in a) if a else "0"


def poly_from_str(s, p):
    return poly_trim([int(tok) for tok in s.split(",") if tok.strip()], p)


# -- the field F_{p^e} --------------------------------------------------------


@dataclass(frozen=True)
class FqField:
    """The field Z_p[t]/(modulus) with basis 1, w, ..., w^(e-1)."""

    p: int
    modulus: Poly
    e: int = field(init=False)

    def __post_init__(self):
        check_prime(self.p)
        mod = poly_trim(self.modulus, self.p)
        if not mod or mod[-1] != 1:
            raise ValueError("modulus must be monic")
        if not poly_irreducible(mod, self.p):
            raise ValueError(f"modulus {poly_to_str(mod)} is reducible over Z_{self.p}")
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "e", len(mod) - 1)

    @classmethod
    def create(cls, p, e, seed=0, modulus=None):
        if modulus is None:
            modulus = find_irreducible(p, e, seed)
        f = cls(p, tuple(modulus))
        if f.e != e:
            raise ValueError(f"modulus has degree {f.e}, expected {e}")
        return f

    @property
    def order(self):
        return self.p**self.e

    # conversions
    def elem(self, coords):
        v = np.zeros(self.e, dtype=np.int64)
        c = np.asarray(coords, dtype=np.int64).ravel() % self.p
        if len(c) > self.e:
            raise ValueError("too many coordinates")
        v[: len(c)] = c
        return v

    def to_poly(self, x):
        return poly_trim(x, self.p)

    def from_poly(self, a):
        return self.elem(poly_mod(a, self.modulus, self.p) or (0,))

    def zero(self):
        return np.zeros(self.e, dtype=np.int64)

    def one(self):
        return self.elem([1])

    def gen(self):
        """The class of t, the generator w of F_q over Z_p."""
        return self.from_poly((0, 1))

    def elements(self):
        """All q elements as a (q, e) array, in integer-encoding order."""
        idx = np.arange(self.order)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.e)], axis=1)

    def encode(self, x):
        x = np.asarray(x, dtype=np.int64)
        return int(np.dot(x % self.p, self.p ** np.arange(self.e)))

    # arithmetic
    def add(self, x, y):
        return (np.asarray(x) + np.asarray(y)) % self.p

    def neg(self, x):
        return (-np.asarray(x)) % self.p

    def sub(self, x, y):
        return (np.asarray(x) - np.asarray(y)) % self.p

    def mul(self, x, y):
        return fq_mul(self, x, y)

    def inv(self, x):
        a = self.to_poly(x)
        if not a:
            raise ZeroDivisionError("inverse of zero in F_q")
        g, s, _ = poly_xgcd(a, self.modulus, self.p)
        assert g == (1,)
        return self.from_poly(s)

    def pow(self, x, n):
        if n < 0:
            x, n = self.inv(x), -n
        return self.from_poly(poly_powmod(self.to_poly(x), n, self.modulus, self.p))

    def is_zero(self, x):
        return not np.any(np.asarray(x) % self.p)

    # matrix forms (row-vector convention: coords(x) @ M = coords(image))
    def mul_matrix(self, lam):
        """Matrix R with x @ R = x * lam."""
        lam = self.to_poly(lam)
        rows = [self.from_poly(poly_mul(((0,) * i) + (1,), lam, self.p)) for i in range(self.e)]
        return np.array(rows, dtype=np.int64).reshape(self.e, self.e)

    @cached_property
    def frobenius_matrix(self):
        rows = [frobenius(self, self.from_poly(((0,) * i) + (1,)), 1) for i in range(self.e)]
        return np.array(rows, dtype=np.int64).reshape(self.e, self.e)

    @cached_property
    def struct_mats(self):
        return structure_matrices(self)

    @cached_property
    def primitive_element(self):
        """Least (by encoding) generator of the multiplicative group."""
        n = self.order - 1
        primes = _prime_factors(n)
        for code in range(1, self.order):
            x = self.elements()[code]
            if all(not np.array_equal(self.pow(x, n // r), self.one()) for r in primes):
                return x
        raise AssertionError("no primitive element")  # pragma: no cover

    def describe(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def fq_mul(field, x, y):
    a, b = field.to_poly(x), field.to_poly(y)
    return field.from_poly(poly_mul(a, b, field.p))


def frobenius(field, x, k=1):
    """x ** (p ** k)."""
    if k < 0:
        raise ValueError(f"Frobenius iterate must be non-negative, got {k}")
    return field.pow(x, field.p ** (k % field.e))


def structure_matrices(field):
    """Array S of shape (e, e, e) with w^i * w^j = sum_k S[k, i, j] w^k."""
    e, p = field.e, field.p
    out = np.zeros((e, e, e), dtype=np.int64)
    for i in range(e):
        for j in range(e):
            prod = field.from_poly(poly_mod(((0,) * (i + j)) + (1,), field.modulus, p) or (0,))
            out[:, i, j] = prod
    return out
