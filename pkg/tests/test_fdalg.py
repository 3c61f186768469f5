import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import InputError
from core.fdalg import (
    AlgebraShape,
    Element,
    a_entries,
    a_entry,
    add,
    adjoint,
    assemble,
    commutes,
    from_blocks,
    identity,
    is_normal,
    is_projection,
    is_unitary,
    matrix_algebra,
    matrix_unit,
    mul,
    op_norm,
    zero,
)
from core.generators import random_element, random_orthogonal_family, random_unitary_element


def test_shape_validation():
    assert AlgebraShape((1, 2)).blocks == (1, 2)
    assert str(AlgebraShape((1, 2))) == "M1+M2"
    with pytest.raises(InputError):
        AlgebraShape(())
    with pytest.raises(InputError, match="positive"):
        AlgebraShape((2, 0))


def test_element_rejects_wrong_blocks():
    shape = AlgebraShape((1, 2))
    with pytest.raises(InputError, match="expected 2 blocks"):
        Element(shape, (np.eye(1),))
    with pytest.raises(InputError, match="does not fit"):
        Element(shape, (np.eye(1), np.eye(3)))


def test_blocks_are_read_only():
    x = identity(AlgebraShape((2,)))
    with pytest.raises(ValueError):
        x.blocks[0][0, 0] = 5.0


def test_mixed_shapes_rejected():
    with pytest.raises(InputError, match="shape mismatch"):
        mul(identity(AlgebraShape((1,))), identity(AlgebraShape((2,))))


def test_operator_sugar(rng):
    shape = AlgebraShape((2, 1))
    x, y = random_element(shape, rng), random_element(shape, rng)
    assert_allclose((x @ y).blocks[0], x.blocks[0] @ y.blocks[0])
    assert_allclose((x + y - y).blocks[1], x.blocks[1])
    assert_allclose((2 * x).blocks[0], 2 * x.blocks[0])
    assert_allclose(x.H.blocks[0], x.blocks[0].conj().T)


def test_op_norm_is_max_over_blocks():
    x = from_blocks([np.array([[3.0]]), np.diag([1.0, -5.0])])
    assert op_norm(x) == pytest.approx(5.0)


def test_c_star_identity(rng):
    for _ in range(20):
        x = random_element(AlgebraShape((3, 2)), rng)
        nx = op_norm(x)
        assert abs(op_norm(mul(adjoint(x), x)) - nx**2) <= 1e-6 * (1 + nx) ** 2


def test_predicates(rng, tol):
    shape = AlgebraShape((2, 2))
    p, q = random_orthogonal_family(shape, rng, 2)
    assert is_projection(p, tol)
    assert is_projection(add(p, q), tol)
    assert commutes(p, q, tol)
    u = random_unitary_element(shape, rng)
    assert is_unitary(u, tol)
    assert is_normal(u, tol)
    assert not is_projection(u, tol)
    nilpotent = from_blocks([np.array([[0.0, 1.0], [0.0, 0.0]])])
    assert not is_normal(nilpotent, tol)


def test_matrix_algebra_scales_blocks():
    assert matrix_algebra(AlgebraShape((1, 2)), 3).blocks == (3, 6)
    with pytest.raises(InputError):
        matrix_algebra(AlgebraShape((1,)), 0)


def test_a_entry_layout():
    base = AlgebraShape((1, 2))
    big = Element(
        matrix_algebra(base, 2),
        (np.arange(4.0).reshape(2, 2), np.arange(16.0).reshape(4, 4)),
    )
    entry = a_entry(big, base, 2, 0, 1)
    assert_allclose(entry.blocks[0], [[1.0]])
    assert_allclose(entry.blocks[1], [[2.0, 3.0], [6.0, 7.0]])
    with pytest.raises(InputError, match="out of range"):
        a_entry(big, base, 2, 2, 0)


def test_assemble_inverts_a_entries(rng):
    base = AlgebraShape((2, 1, 3))
    big = random_element(matrix_algebra(base, 3), rng)
    rebuilt = assemble(a_entries(big, base, 3), base)
    for a, b in zip(rebuilt.blocks, big.blocks):
        assert np.array_equal(a, b)


def test_matrix_unit_products():
    base = AlgebraShape((1, 2))
    e01 = matrix_unit(base, 2, 0, 1)
    e10 = matrix_unit(base, 2, 1, 0)
    e00 = matrix_unit(base, 2, 0, 0)
    assert_allclose(mul(e01, e10).blocks[1], e00.blocks[1])
    assert op_norm(mul(e01, e01)) == 0.0
    total = add(e00, matrix_unit(base, 2, 1, 1))
    assert_allclose(total.blocks[1], identity(matrix_algebra(base, 2)).blocks[1])
    assert op_norm(zero(base)) == 0.0


@pytest.mark.parametrize(
    "block, expected",
    [
        (0.5 * np.array([[1.0, 1.0], [1.0, 1.0]]), True),
        (np.diag([1.0, 0.5]), False),
        (np.diag([1.0, 0.0]), True),
        (np.array([[0.0, 1.0], [0.0, 0.0]]), False),
    ],
)
def test_is_projection_examples(block, expected, tol):
    assert is_projection(from_blocks([block]), tol) is expected


@pytest.mark.parametrize(
    "blocks, norm",
    [([np.diag([3.0, -4.0])], 4.0), ([np.eye(2), np.array([[2.0j]])], 2.0), ([np.zeros((2, 2))], 0.0)],
)
def test_op_norm_examples(blocks, norm):
    assert op_norm(from_blocks(blocks)) == pytest.approx(norm)
