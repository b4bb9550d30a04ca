"""Large-N Schwinger-Dyson solvers on the momentum grid {1/N, ..., 1}^3.

Points are integer triples (i1, i2, i3) with 1 <= i <= N (momentum i/N).
Integrals over a dummy component become (1/N) * sum over the axis.

The algebraic evaluators only use ``table.g(p)``, ``table.lam`` and the
grid, so they work unchanged on series-valued tables (see
:mod:`tensor_sde.perturbation`).
"""
import warnings
from dataclasses import dataclass, field

import numpy as np


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual, iterations):
        super().__init__("%s (residual %.3e after %d iterations)" % (message, residual, iterations))
        self.residual = residual
        self.iterations = iterations


class CoincidentMomentumError(ValueError):
    """A difference quotient would divide by zero: two momenta share a component."""


@dataclass(frozen=True)
class Grid:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("grid size N must be an integer >= 1")

    @property
    def axis(self):
        return np.arange(1, self.n + 1) / self.n

    @property
    def weight(self):
        return 1.0 / self.n

    @property
    def sq(self):
        """|x|^2 on the whole grid, shape (N, N, N)."""
        p2 = self.axis ** 2
        return p2[:, None, None] + p2[None, :, None] + p2[None, None, :]

    def momentum(self, p):
        return tuple(i / self.n for i in p)

    def sq1(self, i):
        return (i / self.n) ** 2

    def sq3(self, p):
        return sum(self.sq1(i) for i in p)

    def check(self, p):
        if len(p) != 3 or any(int(i) != i or not 1 <= i <= self.n for i in p):
            raise ValueError("%r is not a point of the N=%d grid" % (p, self.n))
        return tuple(int(i) for i in p)

    def index_of(self, momentum, tol=1e-9):
        """Grid triple for a momentum triple such as (0.5, 0.25, 1.0)."""
        out = []
        for m in momentum:
            i = round(float(m) * self.n)
            if abs(i - float(m) * self.n) > tol or not 1 <= i <= self.n:
                raise ValueError("momentum %r is not on the N=%d grid" % (m, self.n))
            out.append(i)
        return tuple(out)

    def points(self):
        r = range(1, self.n + 1)
        return [(i, j, k) for i in r for j in r for k in r]


def partial_means(values):
    """H_a: mean over the two components other than a, one array per colour."""
    return (values.mean(axis=(1, 2)), values.mean(axis=(0, 2)), values.mean(axis=(0, 1)))


def _broadcast(h):
    return h[0][:, None, None] + h[1][None, :, None] + h[2][None, None, :]


def g2_map(grid, lam, values):
    """One application of G -> 1/(|x|^2 + 2 lam sum_a H_a(x_a))."""
    return 1.0 / (grid.sq + 2.0 * lam * _broadcast(partial_means(values)))


@dataclass
class CorrelatorTable:
    """Dense 2-point table plus its partial means; immutable after the solve."""
    grid: Grid
    lam: float
    values: np.ndarray
    iterations: int = 0
    residual: float = 0.0
    relaxation: float = 1.0
    arity: int = 1
    boundary_class: str = "m"
    _dh: tuple = field(default=None, repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)
        self.h = partial_means(self.values)

    def g(self, p):
        return self.values[p[0] - 1, p[1] - 1, p[2] - 1]

    def h_dq(self, color, i, j):
        """Difference quotient of H_color in the squared momentum between components i and j.

        At i == j this is the grid derivative (second-order finite differences).
        """
        h = self.h[color - 1]
        if i != j:
            return (h[j - 1] - h[i - 1]) / (self.grid.sq1(j) - self.grid.sq1(i))
        if self.grid.n == 1:
            return 0.0
        if self._dh is None:
            p2 = self.grid.axis ** 2
            self._dh = tuple(np.gradient(hc, p2) for hc in self.h)
        return self._dh[color - 1][i - 1]

    def residual_norm(self):
        return float(np.max(np.abs(self.values - g2_map(self.grid, self.lam, self.values))))


def solve_g2(grid, lam, tol=1e-12, max_iter=10_000, relaxation=1.0, initial=None):
    """Damped Picard iteration for the large-N 2-point equation, from the free propagator."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0 < relaxation <= 1:
        raise ValueError("relaxation must lie in (0, 1]")
    if lam < 0:
        warnings.warn("negative coupling: the fixed-point iteration is not guaranteed to converge",
                      RuntimeWarning, stacklevel=2)
    g = 1.0 / grid.sq if initial is None else np.array(initial, dtype=float)
    omega = relaxation
    growth = 0
    prev = np.inf
    res = np.inf
    for it in range(1, max_iter + 1):
        new = g2_map(grid, lam, g)
        res = float(np.max(np.abs(new - g)))
        if not np.isfinite(res):
            raise ConvergenceError("iteration diverged", res, it)
        if res < tol:
            g = new
            break
        growth = growth + 1 if res >= prev else 0
        if growth >= 3 and omega > 0.5:
            # oscillating or creeping up: fall back to half damping
            omega, growth = 0.5, 0
        g = (1 - omega) * g + omega * new
        prev = res
    else:
        raise ConvergenceError("2-point iteration did not converge", res, max_iter)
    # the last accepted table satisfies the equation to within the last step
    table = CorrelatorTable(grid, lam, np.array(g), it, 0.0, omega)
    table.residual = table.residual_norm()
    return table


# -- connected 4-point ------------------------------------------------------------

def _swap_component(p, color, value):
    out = list(p)
    out[color - 1] = value
    return tuple(out)


def _other(a):
    return tuple(c for c in (1, 2, 3) if c != a)


def eval_g4_connected(table, color, x, y):
    """Pillow 4-point function of colour ``color`` at whites x, y (needs x_a != y_a)."""
    a = color
    if x[a - 1] == y[a - 1]:
        raise CoincidentMomentumError("x_%d == y_%d: the difference quotient is undefined" % (a, a))
    return _g4_value(table, a, x, y)


def _g4_value(table, a, x, y):
    grid = table.grid
    s = _swap_component(y, a, x[a - 1])
    t = _swap_component(x, a, y[a - 1])
    dq = (table.g(x) - table.g(t)) / (grid.sq1(y[a - 1]) - grid.sq1(x[a - 1]))
    return -2 * table.lam * table.g(s) * table.g(y) * dq


def _g4_regular(table, a, x, y):
    """Same as eval_g4_connected but continued to x_a == y_a.

    Uses G(x) - G(t) = G(x) G(t) (y_a^2 - x_a^2) (1 + 2 lam DQ[H_a](x_a, y_a)),
    which follows from the 2-point equation and stays finite at coincidence.
    """
    s = _swap_component(y, a, x[a - 1])
    t = _swap_component(x, a, y[a - 1])
    factor = 1 + 2 * table.lam * table.h_dq(a, x[a - 1], y[a - 1])
    return -2 * table.lam * table.g(s) * table.g(y) * table.g(x) * table.g(t) * factor


# -- disconnected 4-point -----------------------------------------------------------

@dataclass
class DisconnectedTable:
    grid: Grid
    lam: float
    y: tuple
    values: np.ndarray
    iterations: int
    residual: float

    def g(self, x):
        return self.values[x[0] - 1, x[1] - 1, x[2] - 1]


def disconnected_source(table, y, g4=None):
    """sum_a sum_{c != a} (1/N) sum_{q_b} G4_c((x_a, q_b, y_c), y) as an (N, N, N) array over x."""
    grid = table.grid
    n = grid.n
    g4 = g4 or (lambda c, w, yy: _g4_regular(table, c, w, yy))
    # the summand only depends on (x_a, q_b) and on fixed y: tabulate per (a, c)
    src = np.zeros((n, n, n))
    for a in (1, 2, 3):
        for c in _other(a):
            b = [k for k in (1, 2, 3) if k not in (a, c)][0]
            per_xa = np.zeros(n)
            for ia in range(1, n + 1):
                acc = 0.0
                for qb in range(1, n + 1):
                    w = [0, 0, 0]
                    w[a - 1], w[b - 1], w[c - 1] = ia, qb, y[c - 1]
                    acc += g4(c, tuple(w), y)
                per_xa[ia - 1] = acc / n
            shape = [1, 1, 1]
            shape[a - 1] = n
            src = src + per_xa.reshape(shape)
    return src


def solve_g4_disconnected(table, y, tol=1e-12, max_iter=10_000, g4=None):
    """Solve the linear large-N equation for the m|m 4-point function at fixed y.

    G_m(x, y) = -2 lam G(x)^2 sum_a { sum_{c != a} int dq_b G4_c(x_a, q_b, y_c; y)
                                        + int dq_{b,c} G_m((x_a, q_b, q_c), y) }

    Connected 4-point values at x_a == y_a are taken from the continuation
    in :func:`_g4_regular`.  ``g4(c, w, y)`` may override the evaluator.
    """
    grid = table.grid
    y = grid.check(y)
    lam = table.lam
    pref = -2 * lam * table.values ** 2
    src = pref * disconnected_source(table, y, g4)
    gm = np.zeros_like(src)
    res = np.inf
    for it in range(1, max_iter + 1):
        new = src + pref * _broadcast(partial_means(gm))
        res = float(np.max(np.abs(new - gm)))
        gm = new
        if res < tol:
            break
    else:
        raise ConvergenceError("disconnected 4-point iteration did not converge", res, max_iter)
    return DisconnectedTable(grid, lam, y, gm, it, res)


# -- 6-point ------------------------------------------------------------------------

def _dq(grid, num, new, old):
    if new == old:
        raise CoincidentMomentumError("coincident components in a 6-point difference quotient")
    return num / (grid.sq1(new) - grid.sq1(old))


def _g4(table, a, x, y):
    return eval_g4_connected(table, a, x, y)


def eval_g6_bubble(table, x, y, z):
    """Connected planar 6-point function of class G_1 (s = (x1, y2, y3))."""
    grid, lam, g = table.grid, table.lam, table.g
    s = (x[0], y[1], y[2])
    x_y = (y[0], x[1], x[2])
    x_z = (z[0], x[1], x[2])
    t1 = g(y) * _dq(grid, _g4(table, 1, x, z) - _g4(table, 1, x_y, z), y[0], x[0])
    t2 = _g4(table, 1, y, z) * _dq(grid, g(x) - g(x_z), z[0], x[0])
    return -2 * lam * g(s) * (t1 + t2)


def eval_g6_f(table, x, y, z):
    """6-point function of class F_{1;23} (s = (x1, y2, x3))."""
    grid, lam, g = table.grid, table.lam, table.g
    s = (x[0], y[1], x[2])
    y_x = (y[0], x[1], y[2])
    return -2 * lam * g(s) * g(x) * _dq(grid, _g4(table, 3, y, z) - _g4(table, 3, y_x, z), x[1], y[1])


_F_COLOURS = {"F_{1;23}": (1, 2, 3), "F_{2;13}": (2, 1, 3), "F_{3;12}": (3, 1, 2)}


def eval_g6_f_class(table, label, x, y, z):
    """F_{a;bc} from the F_{1;23} formula by relabelling colours."""
    perm = _F_COLOURS[label]
    if perm == (1, 2, 3):
        return eval_g6_f(table, x, y, z)
    # colour perm[k] of the relabelled problem plays the role of colour k+1
    sub = _PermutedTable(table, perm)
    return eval_g6_f(sub, sub.to_local(x), sub.to_local(y), sub.to_local(z))


class _PermutedTable:
    """View of a 2-point table with the colours renamed (the large-N G is colour symmetric)."""

    def __init__(self, table, perm):
        self.base, self.perm = table, perm
        self.grid, self.lam = table.grid, table.lam

    def to_local(self, p):
        return tuple(p[c - 1] for c in self.perm)

    def to_global(self, p):
        out = [0, 0, 0]
        for k, c in enumerate(self.perm):
            out[c - 1] = p[k]
        return tuple(out)

    def g(self, p):
        return self.base.g(self.to_global(p))


def k_terms(x, y, z):
    """The six difference quotients of the K equation as (colour, label, args, moved args, new, old).

    Each is [F(args) - F(moved args)] / (new^2 - old^2): ``args`` is the K
    pattern with the colour-a edges of the first black s = (x1, y2, z3) and
    another black exchanged, ``moved args`` the K pattern with s_a set to ``new``.
    """
    return [
        (1, "F_{1;23}", (x, z, y), ((y[0], x[1], x[2]), z, y), y[0], x[0]),
        (1, "F_{1;23}", (z, y, x), (z, y, (z[0], x[1], x[2])), z[0], x[0]),
        (2, "F_{2;13}", (z, x, y), (z, x, (y[0], z[1], y[2])), z[1], y[1]),
        (2, "F_{2;13}", (y, z, x), ((y[0], x[1], y[2]), z, x), x[1], y[1]),
        (3, "F_{3;12}", (z, y, x), ((z[0], z[1], x[2]), y, x), x[2], z[2]),
        (3, "F_{3;12}", (y, x, z), (y, x, (z[0], z[1], y[2])), y[2], z[2]),
    ]


def eval_g6_k(table, x, y, z):
    """Genus-one 6-point function K (s = (x1, y2, z3)), see :func:`k_terms`."""
    grid, lam, g = table.grid, table.lam, table.g
    s = (x[0], y[1], z[2])
    total = 0
    for _, label, args, moved, new, old in k_terms(x, y, z):
        num = eval_g6_f_class(table, label, *args) - eval_g6_f_class(table, label, *moved)
        total = total + _dq(grid, num, new, old)
    return -2 * lam * g(s) * total


G6_CLASSES = ("G6_conn", "F", "K")


def eval_g6(kind, table, x, y, z):
    """6-point evaluator; ``kind`` is G6_conn (class G_1), F (F_{1;23}) or K."""
    if kind in ("G6_conn", "G_1"):
        return eval_g6_bubble(table, x, y, z)
    if kind in ("F", "F_{1;23}", "F_{2;13}", "F_{3;12}"):
        return eval_g6_f_class(table, "F_{1;23}" if kind == "F" else kind, x, y, z)
    if kind == "K":
        return eval_g6_k(table, x, y, z)
    raise ValueError("unknown 6-point class %r" % (kind,))


# -- feeding large-N tables into the finite-N equations ---------------------------------

class LargeNProvider:
    """Correlator provider (see :mod:`tensor_sde.finite_n`) backed by large-N solutions.

    Pillow values come from the continued connected evaluator, m|m values
    from the disconnected solver at the second white, solved once per white.
    """

    def __init__(self, table):
        self.table = table
        self.n = table.grid.n
        self.order = None
        self._mm = {}

    def g2(self, x):
        return float(self.table.g(x))

    def g4(self, label, x, y):
        if label in ("V_1", "V_2", "V_3"):
            return float(_g4_regular(self.table, int(label[-1]), x, y))
        if label == "m|m":
            y = tuple(y)
            if y not in self._mm:
                self._mm[y] = solve_g4_disconnected(self.table, y)
            return float(self._mm[y].g(x))
        raise KeyError("no large-N 4-point value for sector %r" % (label,))


def decoupling_trend(momenta, sizes=(8, 16, 32), lam=0.1, exponents=None):
    """Size of the 4-point contributions to the finite-N 2-point right-hand side.

    ``momenta`` are points in (0, 1]^3 that lie on every grid in ``sizes``.
    Returns one row per momentum with the magnitudes, whether they decrease
    with N, and the fitted power of N.
    """
    from .finite_n import subleading_four_point
    from .scaling import solve

    exponents = exponents or solve(beta=0).values
    tables = {n: solve_g2(Grid(n), lam) for n in sizes}
    rows = []
    for m in momenta:
        mags = []
        for n in sizes:
            grid = tables[n].grid
            x = grid.index_of(m)
            mags.append(abs(subleading_four_point(LargeNProvider(tables[n]), exponents, x, lam)))
        slope = float(np.polyfit(np.log(sizes), np.log(mags), 1)[0])
        rows.append({"momentum": list(m), "N": list(sizes), "magnitude": mags,
                     "decreasing": all(b < a for a, b in zip(mags, mags[1:])), "power": slope})
    return rows
