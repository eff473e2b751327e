import numpy as np
import pytest

from heisquot.brahana import Pencil, eliminate, heisenberg_pencil, transform
from heisquot.ff import FqField
from heisquot.heisenberg import build, enum_codim2, quotient_pencil
from heisquot.linal import identity
from heisquot.profile import (
    BudgetExceeded,
    Fingerprint,
    ProfileReport,
    SmallGroup,
    SubgroupSet,
    brute_profile,
    conjugate,
    elementary_abelian,
    enum_subgroups,
    fingerprint,
    formula_profile,
    formula_profile_literal,
    frattini,
    gaussian_binomial,
    group_fingerprint,
    quotient_profile,
    stratify,
    subgroups_by_order,
)

B1 = Pencil(np.array([[[1]]]), 3)


def oracle_check(P):
    """formula (from the maximal subgroup dropping the last a-coordinate) vs brute force."""
    G = SmallGroup(P)
    Q, _ = eliminate(P, drop_rows=[P.r - 1])
    M = SmallGroup(Q)
    brute = brute_profile(G)
    formula = formula_profile(stratify(M), P.p, group_fingerprint(G).d)
    return formula, brute


def test_small_group_table_is_a_group():
    G = SmallGroup(B1)
    t = G.table
    assert (t[0] == np.arange(27)).all() and (t[:, 0] == np.arange(27)).all()
    assert (t[np.arange(27), G.inverse] == 0).all()
    assert (np.sort(t, axis=1) == np.arange(27)).all()
    assert (t[t[:, :, None], np.arange(27)[None, None, :]] == t[:, t]).all()


def test_subgroup_counts():
    assert subgroups_by_order(enum_subgroups(SmallGroup(elementary_abelian(3, 2)))) == {1: 1, 3: 4, 9: 1}
    assert subgroups_by_order(enum_subgroups(SmallGroup(B1))) == {1: 1, 3: 13, 9: 4, 27: 1}
    triv = SmallGroup(elementary_abelian(3, 0))
    assert len(enum_subgroups(triv)) == 1


def test_subgroups_are_closed():
    G = SmallGroup(B1)
    for K in enum_subgroups(G):
        el = K.elements
        assert np.isin(G.table[np.ix_(el, el)], el).all()
        assert np.isin(G.inverse[el], el).all()
        assert G.order % K.order == 0


def test_subspace_oracle_for_abelian():
    for n in (2, 3):
        subs = enum_subgroups(SmallGroup(elementary_abelian(3, n)))
        for k in range(n + 1):
            assert sum(1 for K in subs if K.order == 3**k) == gaussian_binomial(n, k, 3)


def test_gen_bound():
    G = SmallGroup(elementary_abelian(3, 3))
    subs = enum_subgroups(G, gen_bound=1)
    assert subgroups_by_order(subs) == {1: 1, 3: 13}


def test_budget():
    with pytest.raises(BudgetExceeded):
        enum_subgroups(SmallGroup(elementary_abelian(3, 3)), budget=5)
    with pytest.raises(BudgetExceeded):
        SmallGroup(heisenberg_pencil((1, 2, 0, 1), 3))


def test_fingerprint_examples():
    G = SmallGroup(B1)
    whole = SubgroupSet(np.arange(27))
    assert fingerprint(G, whole) == Fingerprint(27, 2, 3, 3, 3, ((3, 8),))
    z3 = next(K for K in enum_subgroups(G) if K.order == 3)
    assert fingerprint(G, z3) == Fingerprint(3, 1, 1, 3, 3, ())


def test_fingerprint_conjugation_invariant(rng):
    G = SmallGroup(Pencil(rng.integers(0, 3, (1, 2, 2)), 3))
    subs = enum_subgroups(G)
    for K in subs[:: max(1, len(subs) // 25)]:
        g = int(rng.integers(G.order))
        assert fingerprint(G, conjugate(G, K, g)) == fingerprint(G, K)


def test_fingerprint_matches_descriptor():
    from heisquot.brahana import descriptor

    for P in (B1, heisenberg_pencil((1, 0, 1), 3)):
        G = SmallGroup(P)
        assert tuple(group_fingerprint(G)) == descriptor(P).as_fingerprint()


def test_fingerprint_preserved_by_transform(rng):
    P = Pencil(rng.integers(0, 3, (1, 2, 2)), 3)
    Q, iso = transform(P, np.array([[1, 1], [0, 1]]), np.array([[2, 0], [1, 1]]))
    assert group_fingerprint(SmallGroup(P)) == group_fingerprint(SmallGroup(Q))


@pytest.mark.parametrize("P", [elementary_abelian(3, 2), elementary_abelian(3, 3), elementary_abelian(5, 2)], ids=["Z3^2", "Z3^3", "Z5^2"])
def test_formula_equals_brute_small(P):
    formula, brute = oracle_check(P)
    assert formula == brute


def test_formula_worked_example():
    M = SmallGroup(elementary_abelian(3, 1))
    pred = formula_profile(stratify(M), 3, 2)
    assert pred.classes[Fingerprint(3, 1, 1, 3, 3, ())] == 4
    assert pred.classes[Fingerprint(1, 0, 1, 1, 1, ())] == 1


def test_literal_display_fails():
    strata = stratify(SmallGroup(elementary_abelian(3, 1)))
    with pytest.raises(ZeroDivisionError):
        formula_profile_literal(strata, 3, 1)
    skipped = formula_profile_literal(strata, 3, 1, skip_zero=True)
    brute = brute_profile(SmallGroup(elementary_abelian(3, 2)))
    assert {k: v for k, v in skipped.items() if v} != brute.classes


def test_formula_needs_strata():
    with pytest.raises(ValueError):
        formula_profile({}, 3, 2)


def test_frattini_lemma_on_f9():
    P = heisenberg_pencil((1, 0, 1), 3)
    G = SmallGroup(P)
    Q, incl = eliminate(P, drop_rows=[P.r - 1])
    M = SmallGroup(Q)
    phiG = frattini(G, SubgroupSet(np.arange(G.order)))
    phiM = frattini(M, SubgroupSet(np.arange(M.order)))
    image = G.encode(incl(M.elements[phiM]))
    assert sorted(image.tolist()) == phiG.tolist()


@pytest.mark.slow
def test_formula_equals_brute_order_729():
    formula, brute = oracle_check(heisenberg_pencil((1, 0, 1), 3))
    assert sum(brute.classes.values()) == 3306
    assert formula == brute


def test_quotient_profiles_equal_across_family(ctx27):
    reports = {quotient_profile(quotient_pencil(ctx27, N)).to_json_lines() for N in enum_codim2(ctx27.field)}
    assert len(reports) == 1


def test_quotient_profile_contents(ctx27):
    m = quotient_pencil(ctx27, enum_codim2(ctx27.field)[0])
    rep = quotient_profile(m)
    genus1 = {fp: c for fp, c in rep.classes.items() if fp.derived == 3}
    assert list(genus1.values()) == [4]
    (fp,) = genus1
    assert fp.order == 3**7 and fp.d == 6 and fp.center == 3
    assert rep.classes[Fingerprint(3**6, 6, 1, 3**6, 3, ())] == 1
    assert rep.total() == sum(gaussian_binomial(6, f, 3) for f in range(7)) + 4


def test_quotient_profile_rejects_non_member():
    with pytest.raises(ValueError):
        quotient_profile(type("M", (), {"raw": B1})())


def test_report_serialisation(ctx27):
    rep = quotient_profile(quotient_pencil(ctx27, enum_codim2(ctx27.field)[0]))
    lines = rep.to_json_lines().splitlines()
    import json

    recs = [json.loads(x) for x in lines]
    back = ProfileReport({Fingerprint.from_record(r): r["count"] for r in recs})
    assert back == rep
    csv_text = rep.to_csv()
    assert csv_text.splitlines()[0] == "order,d,derived,center,exponent,classes,count"
    assert len(csv_text.splitlines()) == len(lines) + 1
