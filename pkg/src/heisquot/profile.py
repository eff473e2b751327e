"""Subgroup and quotient profiles.

Small Brahana groups are tabulated (elements indexed by their base-p code)
so that subgroup enumeration and the invariants behind a fingerprint are
integer-array operations.  Isomorphism classes are coarsened to fingerprints:
(order, d, |K'|, |Z(K)|, exponent, noncentral class sizes).
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from heisquot.brahana import Pencil, combine, descriptor
from heisquot.linal import all_vectors, rank

DEFAULT_ORDER_LIMIT = 3**6
DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class Fingerprint(NamedTuple):
    order: int
    d: int
    derived: int
    center: int
    exponent: int
    classes: tuple  # ((size, number of classes), ...), noncentral only

    def record(self):
        return {
            "order": self.order,
            "d": self.d,
            "derived": self.derived,
            "center": self.center,
            "exponent": self.exponent,
            "classes": [list(c) for c in self.classes],
        }

    @classmethod
    def from_record(cls, rec):
        return cls(
            rec["order"], rec["d"], rec["derived"], rec["center"], rec["exponent"],
            tuple(tuple(c) for c in rec["classes"]),
        )


# -- tabulated groups -----------------------------------------------------------


class SmallGroup:
    """A Brahana group with its multiplication table."""

    def __init__(self, pencil, order_limit=DEFAULT_ORDER_LIMIT):
        if pencil.order > order_limit:
            raise BudgetExceeded(f"group order {pencil.order} exceeds limit {order_limit}")
        self.pencil = pencil
        self.p = pencil.p
        self.elements = all_vectors(self.p, pencil.dim)
        self.order = len(self.elements)
        self._weights = self.p ** np.arange(pencil.dim)[::-1]
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for chunk in np.array_split(np.arange(n), max(1, n * n // 200_000)):
            prod = pencil.multiply(self.elements[chunk][:, None, :], self.elements[None, :, :])
            table[chunk] = self.encode(prod)
        self.table = table
        self.identity = 0
        self.inverse = np.argmax(table == 0, axis=1).astype(np.int32)
        self.orders = self._element_orders()

    def encode(self, x):
        return (np.asarray(x) % self.p) @ self._weights if len(self._weights) else np.zeros(np.shape(x)[:-1], dtype=np.int64)

    def _element_orders(self):
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        k = 1
        while (cur != 0).any():
            cur = self.table[cur, np.arange(self.order)]
            k += 1
            done = (cur == 0) & (orders == 1)
            orders[done] = k
        orders[0] = 1
        return orders

    def closure(self, gens):
        """Subgroup generated by the element indices ``gens`` (sorted index array)."""
        gens = np.unique(np.asarray(gens, dtype=np.int64))
        have = np.zeros(self.order, dtype=bool)
        have[0] = True
        frontier = np.array([0])
        while len(frontier):
            new = np.unique(self.table[np.ix_(frontier, gens)].ravel()) if len(gens) else np.array([], int)
            new = new[~have[new]]
            have[new] = True
            frontier = new
        return np.flatnonzero(have)

    def commutator(self, x, y):
        t, inv = self.table, self.inverse
        return t[t[inv[x], inv[y]], t[x, y]]


@dataclass(frozen=True)
class SubgroupSet:
    elements: np.ndarray  # sorted indices
    generators: tuple = ()

    @property
    def order(self):
        return len(self.elements)

    @property
    def key(self):
        return self.elements.astype(np.int32).tobytes()


def _normalizer_mask(G, K):
    t, inv = G.table, G.inverse
    inK = np.zeros(G.order, dtype=bool)
    inK[K] = True
    conj = t[t[:, K], inv[:, None]]  # g k g^-1
    return inK[conj].all(axis=1)


def enum_subgroups(G, gen_bound=None, budget=DEFAULT_BUDGET):
    """All subgroups of the p-group G (or those needing at most ``gen_bound`` generators).

    Layered: each subgroup L > 1 has a maximal subgroup K normal of index p,
    and L = K<g> for any g in L outside K.
    """
    steps = 0
    trivial = SubgroupSet(np.array([0]))
    seen = {trivial.key: trivial}
    layer = [trivial]
    while layer:
        nxt = []
        for K in layer:
            norm = _normalizer_mask(G, K.elements)
            norm[K.elements] = False
            for g in np.flatnonzero(norm):
                if not norm[g]:
                    continue
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(f"subgroup enumeration exceeded {budget} closure steps")
                L = G.closure(np.concatenate([K.elements, [g]]))
                norm[L] = False
                S = SubgroupSet(L, K.generators + (int(g),))
                if S.key not in seen:
                    seen[S.key] = S
                    nxt.append(S)
        layer = nxt
    out = sorted(seen.values(), key=lambda S: (S.order, S.elements.tolist()))
    if gen_bound is not None:
        out = [S for S in out if min_generators(G, S) <= gen_bound]
    return out


def frattini(G, K):
    """Phi(K) = K' K^p for a p-group."""
    el = K.elements
    comms = np.unique(G.commutator(el[:, None], el[None, :]).ravel())
    powers = el.copy()
    for _ in range(G.p - 1):
        powers = G.table[powers, el]
    return G.closure(np.concatenate([comms, powers]))


def min_generators(G, K):
    phi = frattini(G, K)
    return int(round(np.log(K.order // len(phi)) / np.log(G.p))) if K.order > 1 else 0


def fingerprint(G, K):
    el = K.elements
    t = G.table
    comm = G.commutator(el[:, None], el[None, :])
    derived = G.closure(np.unique(comm.ravel()))
    central = (t[np.ix_(el, el)] == t[np.ix_(el, el)].T).all(axis=1)
    sizes = Counter()
    seen = set()
    for x in el:
        if x in seen:
            continue
        cls = np.unique(t[t[el, x], G.inverse[el]])
        seen.update(cls.tolist())
        if len(cls) > 1:
            sizes[len(cls)] += 1
    return Fingerprint(
        K.order,
        min_generators(G, K),
        len(derived),
        int(central.sum()),
        int(G.orders[el].max()),
        tuple(sorted(sizes.items())),
    )


# -- reports -----------------------------------------------------------------------


@dataclass
class ProfileReport:
    classes: dict = field(default_factory=dict)  # Fingerprint -> count
    basis: str = "brute"

    def total(self):
        return sum(self.classes.values())

    def records(self):
        return [dict(fp.record(), count=int(c)) for fp, c in sorted(self.classes.items())]

    def to_json_lines(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records())

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["order", "d", "derived", "center", "exponent", "classes", "count"])
        for r in self.records():
            cls = " ".join(f"{s}x{n}" for s, n in r["classes"])
            w.writerow([r["order"], r["d"], r["derived"], r["center"], r["exponent"], cls, r["count"]])
        return buf.getvalue()

    def __eq__(self, other):
        return isinstance(other, ProfileReport) and self.classes == other.classes


def brute_profile(G, subgroups=None):
    """Fingerprint counts over the proper subgroups of G."""
    subgroups = enum_subgroups(G) if subgroups is None else subgroups
    counts = Counter(fingerprint(G, K) for K in subgroups if K.order < G.order)
    return ProfileReport(dict(counts), "brute")


def stratify(M, subgroups=None):
    """Per fingerprint, the number of K <= M with |M : K Phi(M)| = p^j, keyed by j."""
    subgroups = enum_subgroups(M) if subgroups is None else subgroups
    whole = SubgroupSet(np.arange(M.order))
    phi = frattini(M, whole)
    out = defaultdict(Counter)
    for K in subgroups:
        KP = M.closure(np.concatenate([K.elements, phi]))
        j = int(round(np.log(M.order // len(KP)) / np.log(M.p)))
        out[fingerprint(M, K)][j] += 1
    return {fp: dict(c) for fp, c in out.items()}


def formula_profile(strata, p, dG):
    """Predicted counts of proper subgroups of G, from a maximal subgroup's strata.

    |J(G)| = sum_{f=1}^{dG} (p^dG - 1)/(p^f - 1) #{K <= M : K in J, |M : K Phi(M)| = p^(f-1)}.
    """
    if not strata:
        raise ValueError("stratification missing")
    out = {}
    for fp, by_j in strata.items():
        total = Fraction(0)
        for j, n in by_j.items():
            f = j + 1
            if not 1 <= f <= dG:
                raise ValueError(f"index p^{j} out of range for d(G) = {dG}")
            total += Fraction(p**dG - 1, p**f - 1) * n
        if total.denominator != 1:
            raise ArithmeticError(f"non-integral prediction {total} for {fp}")
        out[fp] = int(total)
    return ProfileReport(out, "formula")


def formula_profile_literal(strata, p, dM, skip_zero=False):
    """The sum as literally displayed: f = log_p |M : K Phi(M)| from 0, coefficient (p^(1+dM)-1)/(p^f-1).

    The f = 0 term divides by zero; ``skip_zero`` drops those terms instead.
    """
    out = {}
    for fp, by_j in strata.items():
        total = Fraction(0)
        for f, n in by_j.items():
            if f == 0 and skip_zero:
                continue
            total += Fraction(p ** (1 + dM) - 1, p**f - 1) * n
        out[fp] = total
    return out


# -- quotient profiles of family members --------------------------------------------


def gaussian_binomial(n, k, p):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _elementary_fp(p, f):
    return Fingerprint(p**f, f, 1, p**f, p if f else 1, ())


def genus1_quotients(member):
    """The p + 1 quotients by order-p subgroups of the centre, as pencils."""
    P = member.raw
    p = P.p
    out = []
    for lam in [(1, 0)] + [(c, 1) for c in range(p)]:
        Q, _ = combine(P, np.array([lam], dtype=np.int64))
        out.append((lam, Q))
    return out


def quotient_profile(member):
    """Fingerprints of the proper quotients of a family member, counted structurally."""
    P = member.raw
    p, e = P.p, P.r
    if P.g != 2 or P.r != P.s or P.genus != 2:
        raise ValueError("not a family member: need a genus-2 pencil of square matrices")
    counts = Counter()
    for f in range(2 * e + 1):
        counts[_elementary_fp(p, f)] += gaussian_binomial(2 * e, f, p)
    for lam, Q in genus1_quotients(member):
        if rank(Q.mats[0], p) != e:
            raise ValueError(f"combination {lam} of the pencil is singular")
        counts[Fingerprint(*descriptor(Q).as_fingerprint())] += 1
    return ProfileReport(dict(counts), "quotient")


def group_fingerprint(G):
    return fingerprint(G, SubgroupSet(np.arange(G.order)))


def conjugate(G, K, g):
    t = G.table
    return SubgroupSet(np.unique(t[t[g, K.elements], G.inverse[g]]))


def elementary_abelian(p, n):
    """Z_p^n as a genus-0 pencil."""
    return Pencil(np.zeros((0, n, 0), dtype=np.int64), p, r=n, s=0)


def subgroups_by_order(subgroups):
    return dict(sorted(Counter(K.order for K in subgroups).items()))


__all__ = [
    "BudgetExceeded",
    "Fingerprint",
    "ProfileReport",
    "SmallGroup",
    "SubgroupSet",
    "brute_profile",
    "conjugate",
    "elementary_abelian",
    "enum_subgroups",
    "fingerprint",
    "formula_profile",
    "formula_profile_literal",
    "frattini",
    "gaussian_binomial",
    "genus1_quotients",
    "group_fingerprint",
    "min_generators",
    "quotient_profile",
    "stratify",
    "subgroups_by_order",
]
