import numpy as np
import pytest

from heisquot.brahana import LinearMap
from heisquot.ff import FqField
from heisquot.heisenberg import AutElem, build, enum_codim2, gamma_group, lift_to_quotient, quotient_pencil
from heisquot.isotest import (
    IsoCertificate,
    ScaleError,
    burnside_count,
    canonical_label,
    classify_ctx,
    classify_family,
    iso_test,
    lifted_map,
    verify_certificate,
)
from heisquot.linal import Subspace
from heisquot.tensoradj import adjoint_algebra

# frozen after the first full enumeration (seed-0 moduli)
FROZEN_CLASS_COUNTS = {(3, 2): 1, (3, 3): 1, (3, 5): 2, (5, 3): 1}


@pytest.fixture(scope="module")
def subs27(f27):
    return enum_codim2(f27)


def test_scalar_and_frobenius_images_iso(ctx27, subs27, rng):
    F = ctx27.field
    for N in subs27[:6]:
        lam = F.elements()[rng.integers(1, 27)]
        scaled = N.image(F.mul_matrix(lam))
        assert iso_test(ctx27, N, scaled) is not None
        frob = N.image(F.frobenius_matrix)
        assert iso_test(ctx27, N, frob) is not None


def test_equivalence_relation(ctx27, subs27):
    rel = np.array([[iso_test(ctx27, a, b) is not None for b in subs27] for a in subs27])
    assert rel.diagonal().all()
    assert (rel == rel.T).all()
    assert ((rel.astype(int) @ rel.astype(int) > 0) <= rel).all()


def test_labels_agree_with_iso(ctx27, subs27):
    labels = [canonical_label(ctx27, N) for N in subs27]
    for i, a in enumerate(subs27):
        for j, b in enumerate(subs27):
            assert (labels[i] == labels[j]) == (iso_test(ctx27, a, b) is not None)


def test_label_invariance(ctx27, subs27, rng):
    G = gamma_group(ctx27.field)
    for _ in range(50):
        N = subs27[rng.integers(len(subs27))]
        g = G[rng.integers(len(G))]
        assert canonical_label(ctx27, N) == canonical_label(ctx27, g.act(ctx27.field, N))


def test_label_trivial_case():
    ctx = build(FqField.create(3, 2))
    N = enum_codim2(ctx.field)[0]
    assert canonical_label(ctx, N) == N


def test_nonisomorphic_pair_at_3_5():
    ctx = build(FqField.create(3, 5))
    C = classify_ctx(ctx)
    (r1, _), (r2, _) = C.orbits()[:2]
    a, b = C.subspaces[r1], C.subspaces[r2]
    assert iso_test(ctx, a, b) is None
    assert canonical_label(ctx, a) != canonical_label(ctx, b)


def test_iso_test_dimension_errors(ctx27):
    with pytest.raises(ValueError):
        iso_test(ctx27, Subspace.zero(3, 3), Subspace.zero(3, 3))


def test_certificates_verify(ctx9, ctx27, subs27):
    N = enum_codim2(ctx9.field)[0]
    assert verify_certificate(ctx9, iso_test(ctx9, N, N))
    for a in subs27[::3]:
        for b in subs27[::4]:
            cert = iso_test(ctx27, a, b)
            if cert is not None:
                assert verify_certificate(ctx27, cert)


def test_identity_certificate(ctx27, subs27):
    cert = iso_test(ctx27, subs27[0], subs27[0])
    assert cert.gamma.lam == (1, 0, 0) and cert.gamma.k == 0
    assert verify_certificate(ctx27, cert)


def test_corrupted_certificate_fails(ctx27, subs27):
    cert = iso_test(ctx27, subs27[1], subs27[5])
    for i, j in [(0, 0), (3, 2), (6, 7), (7, 6)]:
        M = cert.map.matrix.copy()
        M[i, j] = (M[i, j] + 1) % 3
        bad = IsoCertificate(cert.gamma, LinearMap(cert.map.source, cert.map.target, M), cert.source, cert.target)
        assert not verify_certificate(ctx27, bad)


def test_lifted_map_equals_general_lift(ctx27, subs27, rng):
    F = ctx27.field
    for g in gamma_group(F)[::13]:
        m1 = quotient_pencil(ctx27, subs27[2])
        m2 = quotient_pencil(ctx27, g.act(F, subs27[2]))
        lin = lifted_map(ctx27, g, m1, m2)
        gen = lift_to_quotient(ctx27, AutElem.diagonal(F, g.lam, g.k), m1, m2)
        xs = m1.raw.random_elements(rng, 200)
        assert np.array_equal(lin(xs), gen(xs))


def test_adjoint_conjugacy_soundness(ctx27, subs27):
    for b in subs27[::2]:
        cert = iso_test(ctx27, subs27[0], b)
        if cert is None:
            continue
        A1, A2 = adjoint_algebra(cert.source.raw), adjoint_algebra(cert.target.raw)
        assert A1.dim == A2.dim and len(A1.center()) == len(A2.center())


@pytest.mark.parametrize("p,e", [(3, 2), (3, 3), (5, 3), (3, 5)])
def test_classification(p, e):
    C = classify_family(p, e)
    rep = C.report()
    assert rep["class_count"] == rep["burnside_count"] == FROZEN_CLASS_COUNTS[(p, e)]
    assert sum(o["size"] for o in rep["orbits"]) == rep["member_count"]
    assert rep["class_count"] >= -(-(p ** (e - 3)) // e) if e >= 3 else True
    for o in rep["orbits"]:
        assert len(o["a_coeffs"]) == e + 1


def test_burnside_workers_agree(f27, subs27):
    assert burnside_count(f27, subs27, workers=1) == burnside_count(f27, subs27, workers=4)


def test_scale_guard():
    with pytest.raises(ScaleError):
        classify_family(3, 13)


def test_report_is_deterministic():
    a = classify_family(3, 5).report()
    b = classify_family(3, 5).report()
    assert a == b
