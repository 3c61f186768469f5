import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.diag import is_a_diagonal, simultaneous_diagonalize, standard_units
from core.errors import InputError
from core.fdalg import AlgebraShape, Element, adjoint, from_blocks, matrix_algebra, mul, op_norm, sub
from core.generators import random_a_diagonal, random_commuting_family, random_element


@pytest.mark.parametrize(
    "blocks, n, members",
    [((1,), 2, 3), ((2,), 2, 2), ((1, 2), 3, 2), ((3, 2, 1), 2, 4), ((2, 1), 1, 1)],
)
def test_diagonalizes_random_families(blocks, n, members, rng, tol):
    base = AlgebraShape(blocks)
    family, _ = random_commuting_family(base, n, members, rng)
    result = simultaneous_diagonalize(base, n, family, tol)
    report = result.report
    assert report.unitarity_defect <= 1e-10
    assert max(report.residuals) <= 1e-8 * report.scale
    assert max(report.roundtrip) <= 1e-10 * report.scale
    assert max(report.spectrum) <= 1e-8 * report.scale
    for d in result.diagonalized:
        ok, residual = is_a_diagonal(d, base, n, tol, eps=tol.eps_cluster)
        assert ok, residual


def test_output_is_scalar_diagonal(rng, tol):
    base = AlgebraShape((2, 1))
    family, _ = random_commuting_family(base, 2, 3, rng, degenerate=True)
    result = simultaneous_diagonalize(base, 2, family, tol)
    assert max(result.report.scalar_residuals) <= 1e-8 * result.report.scale


def test_conjugation_recovers_input(rng, tol):
    base = AlgebraShape((1,))
    family, _ = random_commuting_family(base, 3, 2, rng)
    result = simultaneous_diagonalize(base, 3, family, tol)
    u = result.u
    for x, d in zip(family, result.diagonalized):
        back = mul(mul(adjoint(u), d), u)
        assert op_norm(sub(back, x)) < 1e-10 * result.report.scale


def test_already_diagonal_family(tol):
    base = AlgebraShape((1,))
    x = from_blocks([np.diag([1.0, 2.0])])
    result = simultaneous_diagonalize(base, 2, [x], tol)
    assert_allclose(np.sort(np.diag(result.diagonalized[0].blocks[0]).real), [1.0, 2.0], atol=1e-12)


def test_is_a_diagonal(rng, tol):
    base = AlgebraShape((2, 1))
    x = random_a_diagonal(base, 3, rng)
    ok, residual = is_a_diagonal(x, base, 3, tol)
    assert ok and residual == 0.0
    y = random_element(matrix_algebra(base, 3), rng)
    assert not is_a_diagonal(y, base, 3, tol)[0]


def test_standard_units_sum_to_one():
    base = AlgebraShape((1, 2))
    units = standard_units(base, 2)
    assert len(units) == 2
    assert_allclose(units[0].blocks[1] + units[1].blocks[1], np.eye(4))


def test_rejects_wrong_shape(rng, tol):
    base = AlgebraShape((1,))
    x = random_element(AlgebraShape((3,)), rng)
    with pytest.raises(InputError, match="expected M_2"):
        simultaneous_diagonalize(base, 2, [x], tol)


def test_rejects_non_commuting(tol):
    base = AlgebraShape((1,))
    a = from_blocks([np.array([[1.0, 0.0], [0.0, -1.0]])])
    b = from_blocks([np.array([[0.0, 1.0], [1.0, 0.0]])])
    with pytest.raises(InputError, match="not commuting"):
        simultaneous_diagonalize(base, 2, [a, b], tol)


def test_rejects_empty_family(tol):
    with pytest.raises(InputError, match="empty"):
        simultaneous_diagonalize(AlgebraShape((1,)), 2, [], tol)


def test_single_block_scalar_case(tol):
    base = AlgebraShape((1,))
    x = Element(AlgebraShape((1,)), (np.array([[2.0 + 1.0j]]),))
    result = simultaneous_diagonalize(base, 1, [x], tol)
    assert_allclose(result.diagonalized[0].blocks[0], [[2.0 + 1.0j]])


def test_swap_in_m2_of_scalars(tol):
    base = AlgebraShape((1,))
    swap = Element(matrix_algebra(base, 2), (np.array([[0.0, 1.0], [1.0, 0.0]]),))
    result = simultaneous_diagonalize(base, 2, [swap], tol)
    d = result.diagonalized[0].blocks[0]
    assert_allclose(d - np.diag(np.diag(d)), np.zeros((2, 2)), atol=1e-10)
    assert sorted(np.diag(d).real) == pytest.approx([-1.0, 1.0])
