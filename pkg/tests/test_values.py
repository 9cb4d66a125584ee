from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coverlens.errors import IndeterminateProductError
from coverlens.values import INF, ZERO, Value

nonneg_fractions = st.fractions(min_value=0, max_denominator=50)
values = st.one_of(
    st.just(INF),
    nonneg_fractions.map(Value.of),
    nonneg_fractions.map(Value.sqrt),
)


def test_sqrt2_below_three_halves():
    # squaring preserves order on nonnegatives: 2 < 9/4
    assert Value.sqrt(2) < Value.of(Fraction(3, 2))


def test_infinity_dominates():
    assert INF > Value.of(10 ** 6)
    assert not INF < INF


def test_mesh_comparison_of_the_two_box_diameters():
    assert Value.sqrt(Fraction(13, 4)) < Value.sqrt(Fraction(53, 16))


def test_scale_examples():
    assert Value.sqrt(2).scale(3) == Value.sqrt(18)
    assert INF.scale(2) == INF
    assert Value.of(Fraction(1, 4)).scale(2) == Value.of(Fraction(1, 2))
    assert Value.of(Fraction(1, 4)).radicand == Fraction(1, 16)
    assert Value.of(Fraction(1, 4)).scale(2).radicand == Fraction(1, 4)


def test_zero_times_infinity_is_an_error():
    with pytest.raises(IndeterminateProductError):
        INF.scale(0)


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        Value.of(-1)
    with pytest.raises(ValueError):
        Value.sqrt(Fraction(-1, 2))
    with pytest.raises(ValueError):
        Value.of(2).scale(Fraction(-1))


def test_serialization_forms():
    assert Value.of(Fraction(3, 4)).serialize() == "3/4"
    assert Value.sqrt(2).serialize() == "sqrt(2)"
    assert INF.serialize() == "inf"
    assert Value.sqrt(Fraction(9, 4)).serialize() == "3/2"  # exact root normalizes


@given(nonneg_fractions)
def test_rational_round_trip(q):
    v = Value.of(q)
    assert v.is_rational_exact
    assert v.as_fraction() == q
    assert Value.parse(v.serialize()) == v


@given(values)
def test_parse_round_trip(v):
    assert Value.parse(v.serialize()) == v


@given(values, values, values)
def test_total_order_on_triples(a, b, c):
    assert (a <= b) or (b <= a)
    if a <= b and b <= a:
        assert a == b
    if a <= b and b <= c:
        assert a <= c


@given(values, values, nonneg_fractions)
def test_scale_is_monotone(a, b, c):
    if c == 0 and (a.is_infinite or b.is_infinite):
        return
    if a <= b:
        assert a.scale(c) <= b.scale(c)


@given(values, nonneg_fractions)
def test_scale_sq_matches_scale(v, c):
    if c == 0 and v.is_infinite:
        return
    assert v.scale(c) == v.scale_sq(c * c)
