"""Perturbative checks: series expansion of the large-N equations and exact
finite-N residuals built on the Wick oracle.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import finite_n
from .finite_n import assemble, others, sq1
from .scaling import CLASS_VARIABLE, solve
from .sde_core import Grid, partial_means
from .series import TruncatedSeries
from .wick import OracleCorrelators, _class_perms, grid_points, pattern_blacks


def physical_exponents():
    return dict(solve(beta=0).values)


# -- large-N series ----------------------------------------------------------------

class SeriesTable:
    """2-point table whose entries are truncated series in the coupling.

    Exposes the same ``g``/``lam``/``grid`` interface as
    :class:`tensor_sde.sde_core.CorrelatorTable`, so the algebraic 4- and
    6-point evaluators accept it.
    """

    def __init__(self, grid, coeffs):
        self.grid = grid
        self.coeffs = coeffs                      # shape (K+1, N, N, N)
        self.order = len(coeffs) - 1
        one = Fraction(1) if coeffs.dtype == object else 1.0
        self.lam = TruncatedSeries.variable(self.order, one)

    def g(self, p):
        i, j, k = (c - 1 for c in p)
        return TruncatedSeries([c[i, j, k] for c in self.coeffs])


def series_solve_g2(grid, order=2, exact=False):
    """Expand G = 1/(|x|^2 + 2 lam sum_a H_a) in lam up to ``order``.

    With D = |x|^2 + 2 lam sum_a H_a[G], the coefficient of lam^k in D is
    2 sum_a H_a[G_(k-1)], and G_k = -G_0 sum_(j=1..k) D_j G_(k-j).
    """
    if isinstance(grid, int):
        grid = Grid(grid)
    if order > 4:
        raise ValueError("series order is limited to 4")
    n = grid.n
    if exact:
        pts = np.arange(1, n + 1)
        sq = np.empty((n, n, n), dtype=object)
        for i, j, k in itertools.product(range(n), repeat=3):
            sq[i, j, k] = Fraction(int(pts[i] ** 2 + pts[j] ** 2 + pts[k] ** 2), n * n)
        g0 = np.vectorize(lambda v: 1 / v, otypes=[object])(sq)
    else:
        g0 = 1.0 / grid.sq
    gs = [g0]
    ds = [None]
    for k in range(1, order + 1):
        h = _partial_means_generic(gs[k - 1], n)
        ds.append(2 * (h[0][:, None, None] + h[1][None, :, None] + h[2][None, None, :]))
        acc = ds[1] * gs[k - 1]
        for j in range(2, k + 1):
            acc = acc + ds[j] * gs[k - j]
        gs.append(-g0 * acc)
    return SeriesTable(grid, np.array(gs))


def finite_difference_coefficients(grid, rel_step=3e-3):
    """First and second lam-derivatives of solve_g2 at lam = 0 (c1 and c2 = G''/2).

    Fourth-order central stencils; the step is ``rel_step`` times the inverse of
    the largest |c1/c0|, which keeps it well inside the radius of convergence
    as the grid is refined.
    """
    import warnings
    from .sde_core import solve_g2

    series = series_solve_g2(grid, order=1)
    h = rel_step / float(np.max(np.abs(series.coeffs[1] / series.coeffs[0])))

    def at(lam):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return solve_g2(grid, lam, tol=1e-15).values

    p1, m1, p2, m2 = at(h), at(-h), at(2 * h), at(-2 * h)
    g0 = 1.0 / grid.sq
    c1 = (8 * (p1 - m1) - (p2 - m2)) / (12 * h)
    c2 = (16 * (p1 + m1) - (p2 + m2) - 30 * g0) / (24 * h * h)
    return c1, c2


def _partial_means_generic(values, n):
    if values.dtype != object:
        return partial_means(values)
    nn = n * n
    return (values.sum(axis=(1, 2)) / nn, values.sum(axis=(0, 2)) / nn, values.sum(axis=(0, 1)) / nn)


def g4_disconnected_c2(grid, y):
    """Order-lam^2 coefficient of the large-N m|m function at fixed y, over all x.

    Only the connected 4-point source contributes at this order; at x_c = y_c
    its free value is -2 lam G0(y)^2 G0(w)^2, so
    c2(x) = 4 G0(x)^2 G0(y)^2 sum_a sum_(c != a) (1/N) sum_q G0(w)^2 with w = (x_a, q, y_c).
    """
    n = grid.n
    g0 = 1.0 / grid.sq
    gy = g0[y[0] - 1, y[1] - 1, y[2] - 1]
    src = np.zeros((n, n, n))
    for a in (1, 2, 3):
        for c in others(a):
            b = 6 - a - c
            per = np.zeros(n)
            for ia in range(1, n + 1):
                acc = 0.0
                for q in range(1, n + 1):
                    w = assemble({a: ia, b: q, c: y[c - 1]})
                    acc += g0[w[0] - 1, w[1] - 1, w[2] - 1] ** 2
                per[ia - 1] = acc / n
            shape = [1, 1, 1]
            shape[a - 1] = n
            src = src + per.reshape(shape)
    return 4 * g0 ** 2 * gy ** 2 * src


def g4_disconnected_c2_numeric(grid, y, rel_step=3e-3):
    """Numerical counterpart of :func:`g4_disconnected_c2` from the large-N solvers.

    The m|m function is even in lam up to lam^3, so
    (16 [G(h) + G(-h)] - [G(2h) + G(-2h)]) / (24 h^2) removes the lam^4 term.
    """
    import warnings
    from .sde_core import solve_g2, solve_g4_disconnected

    series = series_solve_g2(grid, order=1)
    h = rel_step / float(np.max(np.abs(series.coeffs[1] / series.coeffs[0])))

    def at(lam):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return solve_g4_disconnected(solve_g2(grid, lam, tol=1e-15), y).values

    return (16 * (at(h) + at(-h)) - (at(2 * h) + at(-2 * h))) / (24 * h * h)


# -- Wick correlators -------------------------------------------------------------

@dataclass
class WickSpec:
    """External pattern and settings for one exact perturbative correlator.

    ``label`` is a catalogue class; ``whites`` the white momenta (grid
    triples).  ``blacks`` defaults to the pattern of the class and, if
    given, must agree with it.
    """
    label: str
    whites: tuple
    order: int = 2
    n_small: int = 2
    blacks: tuple = None
    exponents: dict = field(default_factory=physical_exponents)


_ORACLES = {}


def _oracle(n, exponents, order):
    key = (n, order, tuple(sorted((k, Fraction(v)) for k, v in exponents.items())))
    if key not in _ORACLES:
        _ORACLES[key] = OracleCorrelators(n, exponents, order)
    return _ORACLES[key]


def wick_correlator(spec):
    """Exact series N^(2k beta - alpha(B)) x cumulant for the pattern in ``spec``."""
    if spec.label not in CLASS_VARIABLE:
        raise ValueError("unknown sector %r" % (spec.label,))
    whites = tuple(tuple(w) for w in spec.whites)
    perms = _class_perms()[spec.label]
    if len(whites) != len(perms[0]):
        raise ValueError("sector %s needs %d white momenta" % (spec.label, len(perms[0])))
    for w in whites:
        if len(w) != 3 or not all(1 <= i <= spec.n_small for i in w):
            raise ValueError("%r is not a point of the N=%d grid" % (w, spec.n_small))
    expected = pattern_blacks(perms, list(whites))
    if spec.blacks is not None and sorted(map(tuple, spec.blacks)) != sorted(expected):
        raise ValueError("black momenta do not follow the %s pattern" % spec.label)
    prov = _oracle(spec.n_small, spec.exponents, spec.order)
    return prov.sector(spec.label, *whites)


# -- residual checks ---------------------------------------------------------------

def _coeff_residuals(diffs, order):
    out = [Fraction(0)] * (order + 1)
    for d in diffs:
        for k in range(order + 1):
            out[k] = max(out[k], abs(Fraction(d[k])))
    return out


def check_wti_identity(n_small=2, order=1, exponents=None, oracle_exponents=None):
    """Residual of the correlator-level Ward identity for every pair a_1 != x_1.

    (G(a) - G(x)) / (x_1^2 - a_1^2) = N^(gamma - beta) G(a) G(x)
        + N^(alpha_V - 5 beta + 3 gamma) sum_(q2, q3) G4_1((a_1, q2, q3), x)

    where a = (a_1, x_2, x_3).  ``exponents`` are used for the powers of N in
    the identity, ``oracle_exponents`` for the correlators (both default to
    the large-N assignment); making them differ is the negative control.
    """
    oracle_exponents = oracle_exponents or physical_exponents()
    exponents = exponents or oracle_exponents
    prov = _oracle(n_small, oracle_exponents, order)
    pw = finite_n.Powers(n_small, exponents)
    n = n_small
    diffs = []
    pairs = 0
    for x in grid_points(n):
        for a1 in range(1, n + 1):
            if a1 == x[0]:
                continue
            pairs += 1
            a = (a1, x[1], x[2])
            lhs = (prov.g2(a) - prov.g2(x)) * (1 / (sq1(n, x[0]) - sq1(n, a1)))
            acc = prov.g2(a) * prov.g2(x) * pw(gamma=1, beta=-1)
            s4 = TruncatedSeries([0] * (order + 1))
            for q2 in range(1, n + 1):
                for q3 in range(1, n + 1):
                    s4 = s4 + prov.g4("V_1", (a1, q2, q3), x)
            diffs.append(lhs - (acc + s4 * pw(alpha_V=1, beta=-5, gamma=3)))
    res = _coeff_residuals(diffs, order)
    return {"check": "wti", "N": n, "order": order, "pairs": pairs,
            "residuals": res, "pass": all(r == 0 for r in res)}


def sector_arguments(sector, n):
    pts = grid_points(n)
    if sector == "2pt":
        return [(x,) for x in pts]
    return [(x, y) for x in pts for y in pts if all(x[c] != y[c] for c in range(3))]


def check_appendix_expansion(sector, n_small=2, order=2, exponents=None, include_f=True):
    """Exact residual LHS - RHS of a finite-N equation with Wick-oracle correlators.

    Also checks the order counting: m|m correlators start at lam^2 (so they
    enter the 2-point equation at lam^3), the 6-point f-terms start at lam^3
    in the 4-point equations, and the m|m 4-point function itself starts at
    lam^2.
    """
    phys = physical_exponents()
    exponents = exponents or phys
    prov = _oracle(n_small, phys, order)
    args_list = sector_arguments(sector, n_small)
    diffs, claims = [], {}
    for args in args_list:
        lhs = finite_n.lhs(sector, prov, args)
        rhs = finite_n.finite_n_sde_rhs(sector, exponents, prov, args, include_f=include_f)
        diffs.append(lhs - rhs)
    notes = {}
    if sector == "2pt":
        # the claim concerns generic configurations; the equation itself sums
        # over w sharing colour a with x, where the m|m pattern coincides with
        # the pillow pattern and starts one order earlier
        ok = True
        for (x,) in args_list:
            for w in grid_points(n_small):
                if all(w[c] != x[c] for c in range(3)):
                    v = prov.g4("m|m", w, x)
                    ok = ok and all(v[k] == 0 for k in range(min(2, order + 1)))
        claims["m|m enters at lam^3"] = ok
        lead = [finite_n.two_point_terms(prov, exponents, x)["mm"].leading_order() for (x,) in args_list]
        lead = [v for v in lead if v is not None]
        notes["lowest order of the coincident m|m term"] = min(lead) + 1 if lead else None
    elif include_f:
        ok = True
        for x, y in args_list:
            for a in (1, 2, 3):
                if sector == "4pt_V1":
                    s_a = (x[0], y[1], y[2])[a - 1]
                    f = finite_n.f_for_graph(prov, a, s_a, x, y, 1)
                else:
                    f = finite_n.assemble_f("m|m", a, x[a - 1], (x, y), prov)
                ok = ok and all(f[k] == 0 for k in range(min(2, order + 1)))
        claims["f-terms enter at lam^3"] = ok
    if sector == "4pt_m" and args_list:
        lead = [finite_n.lhs(sector, prov, a).leading_order() for a in args_list]
        lead = [v for v in lead if v is not None]
        claims["m|m starts at lam^2"] = bool(lead) and min(lead) == 2 if order >= 2 else all(v is None for v in lead)
    res = _coeff_residuals(diffs, order)
    return {"check": "expansion", "sector": sector, "N": n_small, "order": order,
            "arguments": len(args_list), "residuals": res, "claims": claims, "notes": notes,
            "pass": all(r == 0 for r in res) and all(claims.values())}


# -- finite-N versus large-N ------------------------------------------------------

class FreeProvider:
    """Order-1 inputs for the finite-N 2-point equation: free 2-point function, no 4-point."""

    def __init__(self, n, order=1):
        self.n = n
        self.order = order

    def g2(self, x):
        return TruncatedSeries([Fraction(self.n * self.n, sum(i * i for i in x))], self.order)

    def g4(self, label, x, y):
        return TruncatedSeries([0], self.order)


def finite_n_c1(n, x, exponents=None):
    """Order-lam coefficient of the finite-N 2-point function (exact rational)."""
    exponents = exponents or physical_exponents()
    return finite_n.rhs_2pt(FreeProvider(n), exponents, x)[1]


def large_n_c1(n, x):
    return float(series_solve_g2(Grid(n), order=1).g(x)[1])


def large_n_consistency(points=((1, 1, 1), (2, 2, 2), (1, 2, 4)), sizes=(8, 16, 32), base=4):
    """|finite-N c1 - large-N c1| at common momenta p/base over the given grid sizes."""
    rows = []
    for p in points:
        diffs = []
        for n in sizes:
            x = tuple(i * n // base for i in p)
            diffs.append(abs(float(finite_n_c1(n, x)) - large_n_c1(n, x)))
        rows.append({"momentum": [i / base for i in p], "N": list(sizes), "difference": diffs,
                     "decreasing": all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))})
    return rows
