from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tensor_sde.series import TruncatedSeries, coefficient

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)
series = st.lists(rationals, min_size=3, max_size=3).map(TruncatedSeries)
units = st.tuples(rationals.filter(lambda q: q != 0), rationals, rationals).map(TruncatedSeries)


@given(series, series, series)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == TruncatedSeries([0, 0, 0])


@given(units)
def test_reciprocal(s):
    assert s.reciprocal() * s == TruncatedSeries([1, 0, 0])


@settings(max_examples=50)
@given(series, st.integers(min_value=0, max_value=4))
def test_power_matches_repeated_product(s, n):
    prod = TruncatedSeries([1], 2)
    for _ in range(n):
        prod = prod * s
    assert s ** n == prod


def test_truncation_drops_high_orders():
    t = TruncatedSeries.variable(2)
    assert t ** 3 == TruncatedSeries([0, 0, 0])
    assert (1 + t) * (1 - t) == TruncatedSeries([1, 0, -1])


def test_geometric_series():
    t = TruncatedSeries.variable(4, Fraction(1))
    assert (1 - t).reciprocal() == TruncatedSeries([1, 1, 1, 1, 1])


def test_mixed_orders_truncate_to_smaller():
    a = TruncatedSeries([1, 2, 3])
    b = TruncatedSeries([1, 1])
    assert (a + b).order == 1
    assert (a * b).coeffs == (1, 3)


def test_zero_constant_has_no_reciprocal():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries([0, 1]).reciprocal()


def test_evaluate_and_leading_order():
    s = TruncatedSeries([0, 0, Fraction(3, 2)])
    assert s.evaluate(2) == 6
    assert s.leading_order() == 2
    assert TruncatedSeries([0, 0]).leading_order() is None


def test_coefficient_of_plain_numbers():
    assert coefficient(5, 0) == 5
    assert coefficient(5, 1) == 0
    assert coefficient(TruncatedSeries([1, 2]), 3) == 0


def test_float_coefficients():
    s = TruncatedSeries([2.0, 1.0])
    assert s.reciprocal()[1] == pytest.approx(-0.25)
