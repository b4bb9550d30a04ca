"""Exact Gaussian perturbation theory for the tensor model on a small grid.

Grid points are integer triples (i1, i2, i3) with 1 <= i <= N standing for the
momentum (i1/N, i2/N, i3/N).  The oracle expands

    <E> = <E exp(-N^(gamma+delta) lam S_int)>_0 / <exp(-N^(gamma+delta) lam S_int)>_0

in lam, with free covariance <phi_x phibar_x>_0 = N^2 / (N^gamma |i|^2), and
evaluates every free expectation by counting pairings (balanced monomials
give prod n! C^n).  Cumulants follow from moments by the set-partition
formula, which at these orders is the same as keeping connected diagrams.
"""
import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .series import TruncatedSeries

MAX_ORDER = 2
MAX_N = 3


class BudgetError(ValueError):
    """Requested enumeration exceeds the exact-arithmetic budget."""


def int_power(n, e):
    """n**e for a rational exponent that must be an integer."""
    e = Fraction(e)
    if e.denominator != 1:
        raise ValueError("exact checks need integer powers of N, got %s" % e)
    return Fraction(n) ** int(e)


def grid_points(n):
    return list(itertools.product(range(1, n + 1), repeat=3))


def replace(p, color, value):
    """Copy of the triple p with the component of colour 1..3 set to value."""
    out = list(p)
    out[color - 1] = value
    return tuple(out)


def pattern_blacks(perms, whites):
    """Black momenta of a boundary pattern: p^j_c = x^i_c whenever perms[c][i] = j."""
    k = len(whites)
    blacks = [[None] * 3 for _ in range(k)]
    for c in range(3):
        for i, j in enumerate(perms[c]):
            blacks[j][c] = whites[i][c]
    return [tuple(b) for b in blacks]


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


class WickOracle:
    """Moments and cumulants of phi, phibar as exact truncated series in the coupling."""

    def __init__(self, n, gamma=0, delta=-2, order=2):
        if order > MAX_ORDER:
            raise BudgetError("order %d exceeds the enumeration budget %d" % (order, MAX_ORDER))
        if not 1 <= n <= MAX_N:
            raise BudgetError("N_small must be in 1..%d" % MAX_N)
        if n == MAX_N and order > 1:
            raise BudgetError("N_small = 3 is only allowed at order <= 1")
        self.n = n
        self.order = order
        self.gamma = Fraction(gamma)
        self.delta = Fraction(delta)
        self.points = grid_points(n)
        self.site = {p: s for s, p in enumerate(self.points)}
        self.cov = [Fraction(n * n) / (int_power(n, self.gamma) * sum(i * i for i in p)) for p in self.points]
        # coefficient of lam^k in exp(-N^(gamma+delta) lam S_int)
        g = int_power(n, self.gamma + self.delta)
        self.weights = [(-g) ** k / factorial(k) for k in range(order + 1)]
        self._powers = None
        self._z = None
        self._moments = {}

    # fields are encoded as 2*site (phibar) and 2*site + 1 (phi)
    def bar(self, p):
        return 2 * self.site[p]

    def fld(self, p):
        return 2 * self.site[p] + 1

    def interaction(self):
        """Sum over colours and ordered pairs (u, v) of phibar_u phi_(v_c, u_rest) phibar_v phi_(u_c, v_rest)."""
        poly = Counter()
        for c in (1, 2, 3):
            for u in self.points:
                for v in self.points:
                    mono = (self.bar(u), self.fld(replace(u, c, v[c - 1])),
                            self.bar(v), self.fld(replace(v, c, u[c - 1])))
                    poly[tuple(sorted(mono))] += 1
        return dict(poly)

    @staticmethod
    def imbalance(mono):
        d = Counter()
        for f in mono:
            d[f >> 1] += 1 if f & 1 == 0 else -1
        return tuple(sorted((s, v) for s, v in d.items() if v))

    def _power_tables(self):
        """S_int^k for k <= order, grouped by charge imbalance per site."""
        if self._powers is None:
            p1 = self.interaction()
            polys = [{(): 1}, p1]
            if self.order >= 2:
                p2 = Counter()
                for m1, c1 in p1.items():
                    for m2, c2 in p1.items():
                        p2[tuple(sorted(m1 + m2))] += c1 * c2
                polys.append(dict(p2))
            tables = []
            for poly in polys[: self.order + 1]:
                t = {}
                for mono, coef in poly.items():
                    t.setdefault(self.imbalance(mono), []).append((mono, coef))
                tables.append(t)
            self._powers = tables
        return self._powers

    def free_expectation(self, mono):
        counts = Counter(mono)
        out = Fraction(1)
        sites = {f >> 1 for f in counts}
        for s in sites:
            m, k = counts.get(2 * s, 0), counts.get(2 * s + 1, 0)
            if m != k:
                return Fraction(0)
            out *= factorial(m) * self.cov[s] ** m
        return out

    def _raw(self, mono):
        """Unnormalised series <E exp(-g S_int)>_0."""
        tables = self._power_tables()
        key = tuple((s, -v) for s, v in self.imbalance(mono))
        coeffs = []
        for k, table in enumerate(tables):
            acc = Fraction(0)
            for term, coef in table.get(key, ()):
                acc += coef * self.free_expectation(mono + term)
            coeffs.append(self.weights[k] * acc)
        return TruncatedSeries(coeffs)

    def moment(self, fields):
        """<prod fields> as a series; ``fields`` are encoded field ids."""
        key = tuple(sorted(fields))
        if key not in self._moments:
            if self._z is None:
                self._z = self._raw(())
            val = self._raw(key) / self._z
            self._moments[key] = val
        return self._moments[key]

    def cumulant(self, fields):
        """Joint cumulant of the listed fields (moment-cumulant formula over set partitions)."""
        fields = list(fields)
        zero = TruncatedSeries([0] * (self.order + 1))
        total = zero
        for part in set_partitions(range(len(fields))):
            term = None
            for block in part:
                sub = [fields[i] for i in block]
                if sum(1 if f & 1 == 0 else -1 for f in sub) != 0:
                    term = None
                    break
                m = self.moment(sub)
                term = m if term is None else term * m
                if all(c == 0 for c in term):
                    break
            if term is None:
                continue
            r = len(part)
            total = total + term * ((-1) ** (r - 1) * factorial(r - 1))
        return total

    def pattern_cumulant(self, whites, blacks):
        """Cumulant of phibar at the white momenta and phi at the black momenta."""
        return self.cumulant([self.bar(w) for w in whites] + [self.fld(b) for b in blacks])


@lru_cache(maxsize=None)
def _class_perms():
    from .colored_graph import canonical_permutations
    return canonical_permutations()


class OracleCorrelators:
    """Sector correlators N^(2k beta - alpha(B)) x cumulant, from a Wick oracle.

    ``exponents`` maps beta, gamma, delta and the sector variables (see
    :data:`tensor_sde.scaling.CLASS_VARIABLE`) to rationals.
    """

    def __init__(self, n, exponents, order=2):
        from .scaling import CLASS_VARIABLE
        self.n = n
        self.exponents = {k: Fraction(v) for k, v in exponents.items()}
        self.oracle = WickOracle(n, self.exponents["gamma"], self.exponents["delta"], order)
        self._class_variable = CLASS_VARIABLE
        self._cache = {}

    @property
    def order(self):
        return self.oracle.order

    def norm(self, label, k):
        e = 2 * k * self.exponents["beta"] - self.exponents[self._class_variable[label]]
        return int_power(self.n, e)

    def sector(self, label, *whites):
        key = (label,) + whites
        if key not in self._cache:
            blacks = pattern_blacks(_class_perms()[label], list(whites))
            k = len(whites)
            self._cache[key] = self.oracle.pattern_cumulant(list(whites), blacks) * self.norm(label, k)
        return self._cache[key]

    def g2(self, x):
        return self.sector("m", x)

    def g4(self, label, x, y):
        return self.sector(label, x, y)

    def g6(self, label, x, y, z):
        return self.sector(label, x, y, z)
