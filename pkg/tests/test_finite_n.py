from fractions import Fraction

import pytest

from tensor_sde import finite_n
from tensor_sde.perturbation import _oracle, physical_exponents, sector_arguments
from tensor_sde.series import TruncatedSeries
from tensor_sde.wick import grid_points


@pytest.fixture(scope="module")
def oracle():
    return _oracle(2, physical_exponents(), 2)


def residuals(sector, prov, exponents, include_f=True):
    out = []
    for args in sector_arguments(sector, prov.n):
        out.append(finite_n.lhs(sector, prov, args)
                   - finite_n.finite_n_sde_rhs(sector, exponents, prov, args, include_f))
    return out


@pytest.mark.parametrize("sector", finite_n.SECTORS)
def test_equations_hold_exactly_with_oracle_correlators(oracle, sector):
    for r in residuals(sector, oracle, physical_exponents()):
        assert r == TruncatedSeries([0, 0, 0])


@pytest.mark.parametrize("sector", ("4pt_V1", "4pt_m"))
def test_six_point_terms_are_beyond_second_order(oracle, sector):
    for r in residuals(sector, oracle, physical_exponents(), include_f=False):
        assert r == TruncatedSeries([0, 0, 0])


@pytest.mark.parametrize("variable,sector", [("alpha_V", "2pt"), ("alpha_mm", "4pt_m"), ("delta", "4pt_V1")])
def test_wrong_exponent_breaks_the_equation(oracle, variable, sector):
    bad = dict(physical_exponents())
    bad[variable] += 1
    assert any(r != TruncatedSeries([0, 0, 0]) for r in residuals(sector, oracle, bad))


def test_assignment_object_is_accepted(oracle):
    from tensor_sde.scaling import solve
    x = (1, 2, 1)
    assert finite_n.finite_n_sde_rhs("2pt", solve(beta=0), oracle, (x,)) == oracle.g2(x)


def test_four_point_equations_need_distinct_components(oracle):
    with pytest.raises(ValueError):
        finite_n.rhs_4pt_v1(oracle, physical_exponents(), (1, 1, 1), (2, 1, 2))
    with pytest.raises(ValueError):
        finite_n.rhs_4pt_m(oracle, physical_exponents(), (1, 2, 1), (1, 1, 2))


def test_unknown_sector(oracle):
    with pytest.raises(ValueError):
        finite_n.lhs("6pt", oracle, ())
    with pytest.raises(ValueError):
        finite_n.assemble_f("K", 1, 1, ((1, 1, 1), (2, 2, 2)), oracle)


class TwoPointOnly:
    n = 2
    order = 1

    def g2(self, x):
        return TruncatedSeries([Fraction(4, sum(i * i for i in x))], 1)


def test_missing_sector_is_reported():
    with pytest.raises(finite_n.MissingSectorError):
        finite_n.rhs_2pt(TwoPointOnly(), physical_exponents(), (1, 1, 1))


def test_numeric_providers_need_an_explicit_coupling():
    class Numeric(TwoPointOnly):
        order = None

        def g2(self, x):
            return 4.0 / sum(i * i for i in x)

        def g4(self, label, x, y):
            return 1.0

    with pytest.raises(ValueError):
        finite_n.rhs_2pt(Numeric(), physical_exponents(), (1, 1, 1))
    val = finite_n.subleading_four_point(Numeric(), physical_exponents(), (1, 1, 1), 0.5)
    assert isinstance(val, float) and val < 0


def test_helpers():
    assert finite_n.others(2) == (1, 3)
    assert finite_n.assemble({3: 5, 1: 7, 2: 6}) == (7, 6, 5)
    with pytest.raises(ValueError):
        finite_n.assemble({1: 1, 2: 2})
    pw = finite_n.Powers(2, {"beta": 0, "alpha_V": -2})
    assert pw(alpha_V=1, const=1) == Fraction(1, 2)
    assert finite_n.sq(2, (1, 1, 2)) == Fraction(6, 4)
    assert len(grid_points(2)) == 8
