from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tensor_sde import colored_graph as cg
from tensor_sde import scaling as sc


def test_system_contains_required_relations():
    system = sc.build_paper_system()
    texts = {str(c) for c in system.constraints}
    assert "alpha = 2*beta - gamma" in texts
    assert "2*beta = gamma" in texts
    assert "3*beta >= 2*gamma + delta + 1" in texts
    assert "4*beta >= 3*gamma + delta + 2" in texts
    assert "4*beta = 3*gamma + delta + 2" in texts
    assert "alpha_V < 8*beta - 5*gamma - delta - 1" in texts
    assert "alpha_mm < 8*beta - 5*gamma - delta - 2" in texts
    assert "beta >= gamma" in texts
    assert "alpha_V <= 5*beta - 3*gamma - 2" in texts
    assert "alpha_V >= beta + delta" in texts
    eq = system.find("alphamm-leading")[0]
    assert eq.rel == "=" and eq.form.evaluate(
        {"alpha_mm": -3, "alpha_V": -2, "gamma": 0, "delta": -2, "beta": 0}) == 0
    for tag in ("rel1", "rel2", "rel3", "reldecoupling1", "reldecoupling2", "reldecoupling3",
                "beta>=gamma", "alphaV<=", "alphaV>=", "ineg", "melonic-2pt"):
        assert system.find(tag), tag


def test_solve_beta_zero():
    a = sc.solve(beta=0)
    assert a.feasible
    assert {k: a[k] for k in ("alpha", "gamma", "delta", "alpha_V", "alpha_mm")} == \
        {"alpha": 0, "gamma": 0, "delta": -2, "alpha_V": -2, "alpha_mm": -3}
    assert all(isinstance(v, Fraction) for v in a.values.values())


def test_solve_beta_minus_half():
    a = sc.solve(beta=Fraction(-1, 2))
    assert (a["gamma"], a["alpha"], a["delta"], a["alpha_V"]) == (-1, 0, -1, Fraction(-3, 2))
    assert a.feasible


@pytest.mark.parametrize("beta, needle", [(-1, "beta > -1"), (Fraction(-3, 2), "beta > -1"),
                                          (Fraction(1, 3), "0 > beta > gamma")])
def test_solve_infeasible(beta, needle):
    with pytest.raises(sc.InfeasibleError, match=needle):
        sc.solve(beta=beta)


@given(st.fractions(min_value=-1, max_value=0).filter(lambda b: b > -1))
def test_feasible_on_whole_interval(b):
    a = sc.solve(beta=b)
    assert a.feasible and a["alpha"] == 0


def test_conjecture_examples():
    assert sc.conjecture_alpha(1, 1, 0) == 0
    assert sc.conjecture_alpha(2, 2, 0) == -3
    assert sc.conjecture_alpha(3, 1, 1) == -6 == sc.conjecture_alpha(3, 1, 0) - 2


def test_conjecture_matches_catalog():
    a = sc.solve(beta=0)
    rep = sc.verify_assignment(a, cg.catalog())
    assert rep.ok, rep.failures()
    expect = {"m": 0, "V_1": -2, "m|m": -3, "G_1": -4, "F_{1;23}": -4, "m|V_2": -5, "K": -6, "m|m|m": -6}
    for name, v in expect.items():
        assert a.alpha_of(name) == v


def test_tampered_assignments():
    a = sc.solve(beta=0)
    bad = dict(a.values, alpha_mm=Fraction(-2))
    rep = sc.verify_assignment(bad, cg.catalog())
    assert "alphaV>alphamm" in rep.failures()
    bad = dict(a.values, delta=Fraction(-1))
    assert "melonic-2pt" in sc.verify_assignment(bad, cg.catalog()).failures()


def test_slacks_exact():
    a = sc.solve(beta=0)
    slack = {r.tag: r.slack for r in a.report}
    assert slack["reldecoupling3"] == 3   # -2 < 0 - 0 + 2 - 1
    assert slack["rel2"] == 1
    assert all(r.slack >= 0 for r in a.report)


def test_rational_json():
    assert sc.rational_json(Fraction(-3)) == -3
    assert sc.rational_json(Fraction(-3, 2)) == "-3/2"
