from fractions import Fraction

import numpy as np
import pytest

from tensor_sde import perturbation as pt
from tensor_sde.sde_core import Grid
from tensor_sde.wick import BudgetError, grid_points


def c1_by_loops(n, x):
    """-(2/|x|^4) sum_a sum_(q_b, q_c) (1/N^2) / (x_a^2 + q_b^2 + q_c^2), momenta i/N."""
    sq = Fraction(sum(i * i for i in x), n * n)
    acc = Fraction(0)
    for a in range(3):
        for qb in range(1, n + 1):
            for qc in range(1, n + 1):
                acc += Fraction(1, n * n) / Fraction(x[a] ** 2 + qb ** 2 + qc ** 2, n * n)
    return -2 * acc / sq ** 2


def test_series_first_coefficients_exact():
    t = pt.series_solve_g2(3, order=2, exact=True)
    for x in grid_points(3):
        s = t.g(x)
        assert s[0] == Fraction(9, sum(i * i for i in x))
        assert s[1] == c1_by_loops(3, x)


def test_exact_and_float_series_agree():
    a = pt.series_solve_g2(3, order=3, exact=True)
    b = pt.series_solve_g2(3, order=3)
    assert np.allclose(a.coeffs.astype(float), b.coeffs, rtol=1e-13)


def test_series_order_limit():
    with pytest.raises(ValueError):
        pt.series_solve_g2(2, order=5)


@pytest.mark.parametrize("n", [1, 4, 8])
def test_series_against_finite_differences(n):
    g = Grid(n)
    s = pt.series_solve_g2(g, 2)
    c1, c2 = pt.finite_difference_coefficients(g)
    assert np.max(np.abs(c1 - s.coeffs[1]) / np.abs(s.coeffs[1])) <= 1e-6
    assert np.max(np.abs(c2 - s.coeffs[2]) / np.abs(s.coeffs[2])) <= 1e-6


@pytest.mark.parametrize("n,y", [(2, (1, 2, 2)), (6, (2, 3, 5))])
def test_disconnected_second_order_closed_form(n, y):
    g = Grid(n)
    closed = pt.g4_disconnected_c2(g, y)
    numeric = pt.g4_disconnected_c2_numeric(g, y)
    assert np.max(np.abs(closed - numeric) / np.abs(closed)) <= 1e-6


def test_wick_correlator_examples():
    spec = pt.WickSpec("m", [(1, 1, 1)], order=0)
    assert pt.wick_correlator(spec)[0] == Fraction(4, 3)
    mm = pt.wick_correlator(pt.WickSpec("m|m", [(1, 1, 1), (2, 2, 2)], order=1))
    assert mm[1] == 0


def test_wick_correlator_errors():
    with pytest.raises(ValueError):
        pt.wick_correlator(pt.WickSpec("X", [(1, 1, 1)]))
    with pytest.raises(ValueError):
        pt.wick_correlator(pt.WickSpec("V_1", [(1, 1, 1)]))
    with pytest.raises(ValueError):
        pt.wick_correlator(pt.WickSpec("m", [(1, 1, 3)]))
    with pytest.raises(ValueError):
        pt.wick_correlator(pt.WickSpec("V_1", [(1, 1, 1), (2, 2, 2)], blacks=[(1, 1, 1), (2, 2, 2)]))
    ok = pt.WickSpec("V_1", [(1, 1, 1), (2, 2, 2)], order=1, blacks=[(1, 2, 2), (2, 1, 1)])
    assert pt.wick_correlator(ok)[1] != 0
    with pytest.raises(BudgetError):
        pt.wick_correlator(pt.WickSpec("m", [(1, 1, 1)], order=3))


@pytest.mark.parametrize("order", [0, 1])
def test_ward_identity(order):
    r = pt.check_wti_identity(2, order)
    assert r["pass"] and r["pairs"] == 8


def test_ward_identity_negative_control():
    bad = dict(pt.physical_exponents(), gamma=Fraction(-1))
    r = pt.check_wti_identity(2, 1, exponents=bad)
    assert not r["pass"] and r["residuals"][0] != 0


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("sector", ["2pt", "4pt_V1", "4pt_m"])
def test_exact_expansion_residuals(sector, n):
    r = pt.check_appendix_expansion(sector, n, 2)
    assert r["pass"], r
    assert r["residuals"] == [0, 0, 0]


def test_disconnected_term_in_two_point_equation_is_second_order():
    r = pt.check_appendix_expansion("2pt", 2, 2)
    assert r["claims"]["m|m enters at lam^3"]
    assert r["notes"]["lowest order of the coincident m|m term"] == 2


def test_finite_n_matches_large_n_at_first_order():
    rows = pt.large_n_consistency(points=((2, 2, 2),), sizes=(8, 16, 32))
    assert rows[0]["decreasing"]
    d = rows[0]["difference"]
    assert d[1] / d[0] == pytest.approx(0.5, abs=0.05)
