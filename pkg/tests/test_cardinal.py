import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.cardinal import ALEPH_0, ZERO, Cardinal, Tag, add, aleph, finite, mul, pred, succ, sup, sup_plus
from core.errors import InputError

cardinals = st.one_of(
    st.integers(min_value=0, max_value=50).map(finite),
    st.integers(min_value=0, max_value=8).map(aleph),
)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (finite(3), finite(4), finite(7)),
        (finite(3), aleph(0), aleph(0)),
        (aleph(2), aleph(1), aleph(2)),
        (ZERO, aleph(1), aleph(1)),
    ],
)
def test_add(a, b, expected):
    assert add(a, b) == expected


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (finite(3), finite(4), finite(12)),
        (ZERO, aleph(3), ZERO),
        (finite(2), aleph(0), aleph(0)),
        (aleph(1), aleph(1), aleph(1)),
        (aleph(0), aleph(2), aleph(2)),
    ],
)
def test_mul(a, b, expected):
    assert mul(a, b) == expected


def test_successor_and_predecessor():
    assert succ(aleph(0)) == aleph(1)
    assert succ(finite(4)) == finite(5)
    assert pred(aleph(2)) == aleph(1)
    with pytest.raises(InputError, match="not a successor"):
        pred(aleph(0))
    with pytest.raises(InputError):
        pred(ZERO)


def test_sup_and_sup_plus():
    assert sup([finite(5), aleph(0), finite(9)]) == aleph(0)
    assert sup_plus([aleph(0), aleph(3)]) == aleph(4)
    assert sup_plus([]) == ZERO
    with pytest.raises(InputError, match="empty supremum"):
        sup([])


def test_finite_below_every_aleph():
    assert finite(10**6) < ALEPH_0
    assert not ALEPH_0 < finite(10**6)


def test_json_forms():
    assert finite(3).to_json() == 3
    assert aleph(2).to_json() == {"aleph": 2}
    assert Cardinal.from_json({"aleph": 1}) == aleph(1)
    assert Cardinal.from_json(0) == ZERO
    assert str(aleph(3)) == "aleph_3"


@pytest.mark.parametrize("raw", [True, -1, "aleph_0", {"aleph": 1, "x": 2}, {"aleph": "1"}, 1.5])
def test_json_rejects(raw):
    with pytest.raises(InputError):
        Cardinal.from_json(raw)


def test_tag_is_coerced():
    assert Cardinal(1, 0) == aleph(0)
    assert Cardinal(1, 0).tag is Tag.ALEPH


@seed(3)
@settings(max_examples=200, deadline=None)
@given(a=cardinals, b=cardinals)
def test_trichotomy(a, b):
    assert (a < b) + (a == b) + (a > b) == 1


@seed(4)
@settings(max_examples=200, deadline=None)
@given(a=cardinals, b=cardinals)
def test_absorption(a, b):
    if b.is_infinite and not a.is_zero and a <= b:
        assert mul(a, b) == b
        assert add(a, b) == b


@seed(5)
@settings(max_examples=200, deadline=None)
@given(a=cardinals, b=cardinals)
def test_succ_strictly_monotone(a, b):
    if a < b:
        assert succ(a) < succ(b)
