import itertools

import numpy as np
import pytest

from heisquot.brahana import Pencil, combine, heisenberg_pencil, transform
from heisquot.heisenberg import enum_codim2, quotient_pencil
from heisquot.linal import Subspace, companion_std, identity, is_invertible, min_poly
from heisquot.ff import poly_irreducible
from heisquot.tensoradj import (
    TensorDecompositionError,
    adjoint_algebra,
    centralizer,
    factors_through,
    is_heisenberg_quotient,
    pairs_are_adjoint,
    scalar_pairs,
    tensor_space,
)

DIAG = Pencil(np.stack([identity(3), np.diag([0, 1, 2])]), 3)


def eq46_set(F):
    """((al be; ga de), (de -be; -ga al)) over all of F_q^4, as 2e x 2e matrices."""
    R = F.mul_matrix
    out = []
    for al, be, ga, de in itertools.product(F.elements(), repeat=4):
        A = np.block([[R(al), R(be)], [R(ga), R(de)]]) % F.p
        B = np.block([[R(de), R(F.neg(be))], [R(F.neg(ga)), R(al)]]) % F.p
        out.append((A, B))
    return out


def test_f9_adjoint_is_m2(ctx9):
    A = adjoint_algebra(ctx9.pencil)
    assert A.dim == 8
    pairs = eq46_set(ctx9.field)
    assert all(A.is_adjoint(x) for x in pairs)
    span = Subspace.from_rows(np.array([A.flatten(x) for x in pairs]), 3, 32)
    assert span == A.as_subspace()


def test_scalars_for_b1():
    B1 = Pencil(np.array([[[1]]]), 3)
    A = adjoint_algebra(B1, "bilinear")
    assert A.dim == 1
    F, G = A.basis[0]
    assert F[0, 0] == G[0, 0] != 0


def test_diag_pencil_dimensions():
    assert adjoint_algebra(DIAG).dim == 12
    assert adjoint_algebra(DIAG, "bilinear").dim == 3


def test_unknown_bimap():
    with pytest.raises(ValueError):
        adjoint_algebra(DIAG, "quadratic")


def test_closure_and_identity(ctx27, rng):
    A = adjoint_algebra(ctx27.pencil)
    assert A.contains_identity()
    for _ in range(20):
        i, j = rng.integers(0, A.dim, 2)
        assert A.is_adjoint(A.multiply(A.basis[i], A.basis[j]))


def test_dimension_invariant_under_transform(ctx9, rng):
    P = ctx9.pencil
    for _ in range(5):
        X = rng.integers(0, 3, (2, 2))
        Y = rng.integers(0, 3, (2, 2))
        if is_invertible(X, 3) and is_invertible(Y, 3):
            Q, _ = transform(P, X, Y)
            assert adjoint_algebra(Q).dim == adjoint_algebra(P).dim


def test_centralizers():
    C = companion_std((1, 2, 0, 1), 3)
    basis = centralizer(C, 3)
    assert len(basis) == 3
    powers = Subspace.from_rows(np.array([np.linalg.matrix_power(C, k).ravel() % 3 for k in range(3)]), 3, 9)
    assert Subspace.from_rows(np.array([b.ravel() for b in basis]), 3, 9) == powers
    assert len(centralizer(identity(3), 3)) == 9
    diag = centralizer(np.diag([0, 1, 2]), 3)
    assert len(diag) == 3 and all(np.count_nonzero(b - np.diag(np.diag(b))) == 0 for b in diag)


def test_tensor_scalar_pairs():
    ts = tensor_space(scalar_pairs(2, 3), 2, 3, 3)
    assert ts.relations.dim == 0 and ts.fixed.dim == 6
    u, v = np.array([1, 2]), np.array([0, 1, 1])
    assert np.array_equal(ts.tensor(u, v), np.outer(u, v).ravel() % 3)


def test_tensor_direct_sum_failure():
    N = np.array([[0, 1], [0, 0]])
    with pytest.raises(TensorDecompositionError):
        tensor_space([(N, np.zeros((2, 2), dtype=np.int64))], 2, 2, 3)


def test_tensor_shape_check():
    with pytest.raises(ValueError):
        tensor_space([(identity(2), identity(3))], 2, 2, 3)


def test_f9_tensor_is_determinant(ctx9, rng):
    F, P = ctx9.field, ctx9.pencil
    A = adjoint_algebra(P)
    ts = tensor_space(A.basis, 4, 4, 3)
    assert ts.fixed.dim == F.e
    fm = factors_through(P, A.basis)
    assert fm is not None
    for _ in range(50):
        u, v = rng.integers(0, 3, 4), rng.integers(0, 3, 4)
        det = F.sub(F.mul(u[:2], v[2:]), F.mul(u[2:], v[:2]))
        assert np.array_equal(fm.bimap(u, v), det)


def test_factor_trivially_through_scalars(ctx27):
    fm = factors_through(ctx27.pencil, scalar_pairs(6))
    assert fm is not None
    u, v = np.arange(6) % 3, np.ones(6, dtype=np.int64)
    want = ctx27.pencil.bracket_forms()
    assert np.array_equal(fm.bimap(u, v), np.einsum("i,kij,j->k", u, want, v) % 3)


def test_refusal_when_pairs_are_not_adjoint(ctx27):
    member = quotient_pencil(ctx27, enum_codim2(ctx27.field)[0])
    big = adjoint_algebra(member.raw).basis
    assert factors_through(member.raw, big) is not None
    assert not pairs_are_adjoint(DIAG, big)
    assert factors_through(DIAG, big) is None


@pytest.mark.parametrize("seed", range(8))
def test_factorization_iff_adjoint(seed):
    rng = np.random.default_rng(seed)
    P = Pencil(rng.integers(0, 3, (2, 2, 2)), 3)
    A = adjoint_algebra(P)
    pairs = [A.basis[i] for i in rng.choice(A.dim, size=min(2, A.dim), replace=False)]
    if seed % 2:
        F, G = pairs[0]
        pairs[0] = ((F + rng.integers(0, 3, F.shape)) % 3, G)
    try:
        fm = factors_through(P, pairs)
    except TensorDecompositionError:
        return
    assert (fm is not None) == pairs_are_adjoint(P, pairs)


def test_membership():
    ok = is_heisenberg_quotient(heisenberg_pencil((1, 2, 0, 1), 3), 3)
    assert ok and ok.min_poly == (1, 2, 0, 1)
    assert not is_heisenberg_quotient(DIAG, 3)
    swap = Pencil(np.stack([identity(2), np.array([[0, 1], [1, 0]])]), 3)
    res = is_heisenberg_quotient(swap, 2)
    assert not res and res.min_poly == (2, 0, 1)


def test_membership_input_checks(ctx27):
    with pytest.raises(ValueError):
        is_heisenberg_quotient(ctx27.pencil, 3)
    with pytest.raises(ValueError):
        is_heisenberg_quotient(DIAG, 2)
    dep = Pencil(np.stack([identity(3), 2 * identity(3)]), 3)
    assert not is_heisenberg_quotient(dep, 3)


def test_membership_finds_invertible_combination():
    # first matrix singular, second invertible
    P = Pencil(np.stack([np.diag([1, 0]), identity(2)]), 3)
    C = companion_std((1, 0, 1), 3)
    Q, _ = combine(Pencil(np.stack([identity(2), C]), 3), [[1, 1], [0, 1]])
    res = is_heisenberg_quotient(Q, 2)
    assert res and poly_irreducible(res.min_poly, 3)
    assert not is_heisenberg_quotient(P, 2)
