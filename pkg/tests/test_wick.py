import itertools
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from tensor_sde.perturbation import finite_n_c1, physical_exponents
from tensor_sde.series import TruncatedSeries
from tensor_sde.wick import (BudgetError, OracleCorrelators, WickOracle, grid_points, int_power,
                             pattern_blacks, set_partitions)


def single_site_two_point(order):
    """<|phi|^2> for one site: weight exp(-3r - 3 lam r^2), r = |phi|^2, <r^k>_0 = k!/3^k."""
    m = lambda k: Fraction(factorial(k), 3 ** k)
    num = [m(1), -3 * m(3), Fraction(9, 2) * m(5)][: order + 1]
    den = [m(0), -3 * m(2), Fraction(9, 2) * m(4)][: order + 1]
    return TruncatedSeries(num) / TruncatedSeries(den)


def test_single_site_matches_exponential_moments():
    prov = OracleCorrelators(1, physical_exponents(), order=2)
    assert prov.g2((1, 1, 1)) == single_site_two_point(2)


def test_free_two_point_n2():
    prov = OracleCorrelators(2, physical_exponents(), order=0)
    assert prov.g2((1, 1, 1))[0] == Fraction(4, 3)
    assert prov.g2((2, 1, 2))[0] == Fraction(4, 9)


def test_first_order_matches_one_equation_substitution():
    prov = OracleCorrelators(2, physical_exponents(), order=1)
    for x in grid_points(2):
        assert prov.g2(x)[1] == finite_n_c1(2, x)


def test_free_four_point_cumulants_vanish():
    prov = OracleCorrelators(2, physical_exponents(), order=0)
    for label in ("V_1", "V_2", "m|m"):
        assert prov.g4(label, (1, 1, 2), (2, 2, 1))[0] == 0


def test_disconnected_sector_starts_at_second_order():
    prov = OracleCorrelators(2, physical_exponents(), order=2)
    v = prov.g4("m|m", (1, 1, 1), (2, 2, 2))
    assert v[0] == 0 and v[1] == 0 and v[2] != 0


def test_pillow_sector_starts_at_first_order():
    prov = OracleCorrelators(2, physical_exponents(), order=1)
    v = prov.g4("V_1", (1, 1, 1), (2, 2, 2))
    assert v[0] == 0 and v[1] != 0


@settings(max_examples=20, deadline=None)
@given(st.permutations([0, 1, 2]), st.sampled_from(grid_points(2)))
def test_colour_permutation_symmetry(perm, x):
    prov = OracleCorrelators(2, physical_exponents(), order=1)
    y = tuple(x[perm[i]] for i in range(3))
    assert prov.g2(x) == prov.g2(y)


def test_cumulant_of_balanced_pair_is_moment():
    w = WickOracle(2, order=1)
    f = [w.bar((1, 2, 1)), w.fld((1, 2, 1))]
    assert w.cumulant(f) == w.moment(f)


def test_unbalanced_moment_vanishes():
    w = WickOracle(2, order=1)
    assert w.moment([w.bar((1, 1, 1)), w.fld((1, 1, 2))]) == TruncatedSeries([0, 0])


def test_budget():
    with pytest.raises(BudgetError):
        WickOracle(2, order=3)
    with pytest.raises(BudgetError):
        WickOracle(4, order=1)
    with pytest.raises(BudgetError):
        WickOracle(3, order=2)
    WickOracle(3, order=1)


def test_int_power():
    assert int_power(2, -3) == Fraction(1, 8)
    with pytest.raises(ValueError):
        int_power(2, Fraction(1, 2))


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(n))) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_pattern_blacks_pillow():
    ident, swap = (0, 1), (1, 0)
    x, y = (1, 2, 3), (4, 5, 6)
    assert pattern_blacks([ident, swap, swap], [x, y]) == [(1, 5, 6), (4, 2, 3)]
    assert pattern_blacks([ident] * 3, [x, y]) == [x, y]


def test_four_point_exchange_symmetry_through_second_order():
    prov = OracleCorrelators(2, physical_exponents(), order=2)
    for x, y in itertools.combinations(grid_points(2), 2):
        for label in ("V_1", "V_2", "V_3", "m|m"):
            assert prov.g4(label, x, y) == prov.g4(label, y, x)
