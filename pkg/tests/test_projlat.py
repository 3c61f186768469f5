import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import InputError
from core.fdalg import AlgebraShape, Element, adjoint, from_blocks, identity, mul, op_norm, sub
from core.generators import random_projection, random_unitary
from core.projlat import (
    CentralProjection,
    abelian_cover_check,
    central_cover,
    complement,
    comparison_decomposition,
    compress,
    corner_central_cover,
    equivalent,
    in_corner,
    is_abelian,
    is_orthogonal,
    partial_isometry,
    proj_inf,
    proj_sup,
    rank_vector,
    strict_subequiv,
    subequiv,
    type_decomposition,
    unitary_from_equivalences,
)


def diag_proj(*diagonals):
    return from_blocks([np.diag(np.asarray(d, dtype=float)) for d in diagonals])


def test_rank_vector_and_equivalence(rng, tol):
    shape = AlgebraShape((3, 2))
    p = random_projection(shape, rng, ranks=(2, 1))
    q = random_projection(shape, rng, ranks=(2, 1))
    assert rank_vector(p, tol) == (2, 1)
    assert equivalent(p, q, tol)
    assert subequiv(p, identity(shape), tol)
    assert strict_subequiv(p, identity(shape), tol)


def test_strict_allows_zero_below_zero(tol):
    z = diag_proj([0, 0], [0])
    assert strict_subequiv(z, z, tol)
    p = diag_proj([1, 0], [0])
    assert not strict_subequiv(p, p, tol)


def test_rank_vector_rejects_non_projection(tol):
    with pytest.raises(InputError, match="not a projection"):
        rank_vector(from_blocks([np.array([[2.0]])]), tol)


def test_partial_isometry(rng, tol):
    shape = AlgebraShape((3,))
    p = random_projection(shape, rng, ranks=(2,))
    q = random_projection(shape, rng, ranks=(2,))
    v = partial_isometry(p, q, tol)
    assert op_norm(sub(mul(adjoint(v), v), p)) < 1e-10
    assert op_norm(sub(mul(v, adjoint(v)), q)) < 1e-10
    with pytest.raises(InputError, match="not equivalent"):
        partial_isometry(p, random_projection(shape, rng, ranks=(1,)), tol)


@pytest.mark.parametrize(
    "e, f, flags",
    [
        # (x, y, z) per block
        (([1, 0], [1]), ([1, 1], [0]), ((True, False), (False, False), (False, True))),
        (([1, 1], [1]), ([1, 1], [1]), ((False, False), (True, True), (False, False))),
        (([0, 0], [0]), ([0, 0], [0]), ((False, False), (True, True), (False, False))),
    ],
)
def test_comparison_decomposition(e, f, flags, tol):
    x, y, z = comparison_decomposition(diag_proj(*e), diag_proj(*f), tol)
    assert (x.flags, y.flags, z.flags) == flags


def test_comparison_same_projection_gives_full_y(rng, tol):
    p = random_projection(AlgebraShape((2, 3)), rng)
    x, y, z = comparison_decomposition(p, p, tol)
    assert y.flags == (True, True)
    assert x.is_zero and z.is_zero


def test_sup_and_inf(tol):
    p = from_blocks([np.diag([1.0, 0.0, 0.0])])
    v = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    q = from_blocks([np.outer(v, v)])
    sup = proj_sup([p, q], tol)
    assert rank_vector(sup, tol) == (2,)
    assert_allclose(sup.blocks[0], np.diag([1.0, 1.0, 0.0]), atol=1e-12)
    assert rank_vector(proj_inf(p, q, tol), tol) == (0,)
    assert rank_vector(proj_inf(sup, p, tol), tol) == (1,)
    with pytest.raises(InputError):
        proj_sup([], tol)


def test_complement_and_orthogonality(tol):
    p = diag_proj([1, 0], [1])
    assert is_orthogonal(p, complement(p), tol)
    assert not is_orthogonal(p, p, tol)


def test_central_cover_and_element(tol):
    p = diag_proj([1, 0], [0], [0, 0, 1])
    assert central_cover(p, tol).flags == (True, False, True)
    z = CentralProjection((True, False))
    assert z.complement().flags == (False, True)
    assert (z | z.complement()).flags == (True, True)
    assert (z & z.complement()).is_zero
    with pytest.raises(InputError):
        z.element(AlgebraShape((1,)))


def test_corner_cover(rng, tol):
    shape = AlgebraShape((3, 2))
    e = diag_proj([1, 1, 0], [1, 0])
    f = diag_proj([1, 0, 0], [0, 0])
    cover = corner_central_cover(e, f, tol)
    assert_allclose(cover.blocks[0], np.diag([1.0, 1.0, 0.0]))
    assert_allclose(cover.blocks[1], np.zeros((2, 2)))
    assert in_corner(e, f, tol)
    assert_allclose(compress(e, identity(shape)).blocks[0], e.blocks[0])
    with pytest.raises(InputError, match="corner"):
        corner_central_cover(f, e, tol)


def test_abelian_and_type_decomposition(tol):
    assert is_abelian(diag_proj([1, 0], [1]), tol)
    assert not is_abelian(diag_proj([1, 1], [0]), tol)
    shape = AlgebraShape((2, 1, 2))
    types = type_decomposition(shape)
    assert types[2].flags == (True, False, True)
    assert types[1].flags == (False, True, False)
    assert abelian_cover_check(shape) == {1: True, 2: True}


def test_unitary_from_equivalences(rng, tol):
    shape = AlgebraShape((2,))
    w = random_unitary(2, rng)
    es = [Element(shape, (np.outer(w[:, j], w[:, j].conj()),)) for j in range(2)]
    fs = [diag_proj([1, 0]), diag_proj([0, 1])]
    u = unitary_from_equivalences(es, fs, tol)
    for e, f in zip(es, fs):
        assert op_norm(sub(mul(mul(u, e), adjoint(u)), f)) < 1e-10
    with pytest.raises(InputError, match="sum to 1"):
        unitary_from_equivalences(es[:1], fs[:1], tol)


def test_partial_isometry_between_diagonal_units(tol):
    v = partial_isometry(diag_proj([1, 0]), diag_proj([0, 1]), tol)
    assert_allclose(v.blocks[0], [[0.0, 0.0], [1.0, 0.0]], atol=1e-12)


@pytest.mark.parametrize("ranks", [(1,), (2,), (0,)])
def test_partial_isometry_of_projection_with_itself(ranks, rng, tol):
    p = random_projection(AlgebraShape((3,)), rng, ranks=ranks)
    v = partial_isometry(p, p, tol)
    assert op_norm(sub(v, p)) < 1e-10
