"""Full verification suite behind ``tensor-sde verify``.

Every check is deterministic: no timings or wall-clock data go into the
report, so two runs produce identical JSON.
"""
import itertools

import numpy as np


def _check(name, ok, **detail):
    return dict(detail, name=name, ok=bool(ok))


def scaling_checks():
    from .colored_graph import catalog
    from .scaling import solve, verify_assignment

    res = solve(beta=0)
    rep = verify_assignment(res, catalog())
    want = {"alpha": 0, "gamma": 0, "delta": -2, "alpha_V": -2, "alpha_mm": -3}
    return [
        _check("scaling: beta = 0 assignment", res.feasible and all(res[k] == v for k, v in want.items()),
               values={k: res[k] for k in sorted(res.values)}),
        _check("scaling: conjectured exponents for all classes", rep.ok, failures=rep.failures(),
               classes=len(rep.class_checks)),
    ]


def graph_checks():
    from . import colored_graph as cg

    v1 = cg.catalog_graph("V_1")
    swaps = {c: cg.classify(cg.swap(v1, c, (0, 1))).name for c in (1, 2, 3)}
    aut = {name: cg.count_automorphisms(cg.catalog_graph(name)) for name in ("V_1", "G_1")}
    involution = all(cg.swap(cg.swap(g, c, pair), c, pair) == g
                     for g in map(cg.catalog_graph, cg.CLASS_NAMES)
                     for pair in itertools.combinations(sorted(g.whites), 2) for c in (1, 2, 3))
    genus_ok = cg.genus(cg.catalog_graph("K")) == 1 and all(
        bc.genus == 0 for bc in cg.catalog() if bc.vertex_count == 4)
    return [
        _check("graph: swaps of V_1", swaps == {1: "m|m", 2: "V_3", 3: "V_2"}, swaps=swaps),
        _check("graph: automorphism counts", aut == {"V_1": 2, "G_1": 3}, counts=aut),
        _check("graph: swap is an involution", involution),
        _check("graph: genus", genus_ok),
    ]


def solver_checks():
    from .sde_core import Grid, solve_g2

    out = []
    g = Grid(4)
    free = solve_g2(g, 0.0)
    err = float(np.max(np.abs(free.values - 1.0 / g.sq)))
    out.append(_check("solver: free propagator at lam = 0", err <= 1e-14, error=err))
    one = solve_g2(Grid(1), 1.0).g((1, 1, 1))
    exact = (-3 + np.sqrt(33)) / 12
    out.append(_check("solver: N = 1 closed form", abs(one - exact) <= 1e-12, value=one, exact=exact))
    for lam in (0.01, 0.1):
        t = solve_g2(Grid(16), lam)
        out.append(_check("solver: residual at N = 16, lam = %s" % lam, t.residual < 1e-12,
                          residual=t.residual, iterations=t.iterations))
    return out


def series_checks():
    from .perturbation import finite_difference_coefficients, series_solve_g2
    from .sde_core import Grid

    g = Grid(4)
    s = series_solve_g2(g, 2)
    c1, c2 = finite_difference_coefficients(g)
    e1 = float(np.max(np.abs(c1 - s.coeffs[1]) / np.abs(s.coeffs[1])))
    e2 = float(np.max(np.abs(c2 - s.coeffs[2]) / np.abs(s.coeffs[2])))
    return [_check("series: c1, c2 against finite differences", max(e1, e2) <= 1e-6,
                   relative_error_c1=e1, relative_error_c2=e2)]


def perturbation_checks():
    from fractions import Fraction

    from .perturbation import check_appendix_expansion, check_wti_identity, physical_exponents

    out = []
    for n in (1, 2):
        for sector in ("2pt", "4pt_V1", "4pt_m"):
            r = check_appendix_expansion(sector, n, 2)
            out.append(_check("perturbation: %s residual at N = %d" % (sector, n), r["pass"],
                              residuals=r["residuals"], claims=r["claims"], arguments=r["arguments"]))
    w = check_wti_identity(2, 1)
    out.append(_check("perturbation: Ward identity at N = 2", w["pass"], residuals=w["residuals"]))
    bad = dict(physical_exponents(), gamma=Fraction(-1))
    ctrl = check_wti_identity(2, 1, exponents=bad)
    out.append(_check("perturbation: Ward identity negative control", not ctrl["pass"],
                      residuals=ctrl["residuals"]))
    return out


def decoupling_checks():
    from .sde_core import decoupling_trend

    rows = decoupling_trend([(0.5, 0.5, 0.5), (0.25, 0.5, 1.0), (1.0, 1.0, 1.0)])
    ok = all(r["decreasing"] and abs(r["power"] + 3) <= 0.3 for r in rows)
    return [_check("large N: 4-point terms decouple like N^-3", ok, rows=rows)]


def run_verification():
    checks = (scaling_checks() + graph_checks() + solver_checks() + series_checks()
              + perturbation_checks() + decoupling_checks())
    return {"checks": checks, "pass": all(c["ok"] for c in checks)}
