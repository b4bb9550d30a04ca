"""Exact linear constraint system on the large-N scaling exponents.

Exponents: ``alpha`` (2-point), ``beta`` (sources), ``gamma`` (action),
``delta`` (coupling) and one ``alpha_*`` per boundary-graph sector.  All
arithmetic uses ``Fraction``.
"""
from dataclasses import dataclass, field
from fractions import Fraction

# sector exponent variable for every catalogue class (alpha is the melon sector)
CLASS_VARIABLE = {
    "m": "alpha",
    "V_1": "alpha_V", "V_2": "alpha_V", "V_3": "alpha_V",
    "m|m": "alpha_mm",
    "G_1": "alpha_G6", "G_2": "alpha_G6", "G_3": "alpha_G6",
    "K": "alpha_K",
    "F_{1;23}": "alpha_F", "F_{2;13}": "alpha_F", "F_{3;12}": "alpha_F",
    "m|V_1": "alpha_mV", "m|V_2": "alpha_mV", "m|V_3": "alpha_mV",
    "m|m|m": "alpha_mmm",
}

# (k, B, g) of the class behind each sector variable
VARIABLE_TOPOLOGY = {
    "alpha": (1, 1, 0), "alpha_V": (2, 1, 0), "alpha_mm": (2, 2, 0),
    "alpha_G6": (3, 1, 0), "alpha_F": (3, 1, 0), "alpha_K": (3, 1, 1),
    "alpha_mV": (3, 2, 0), "alpha_mmm": (3, 3, 0),
}

VARIABLES = ("alpha", "beta", "gamma", "delta") + tuple(v for v in VARIABLE_TOPOLOGY if v != "alpha")

RELATIONS = ("=", ">=", ">", "<=", "<")


class InfeasibleError(ValueError):
    """No admissible exponent assignment for the requested beta."""


class Lin:
    """Linear form sum(c_v * v) + c0 with rational coefficients."""

    def __init__(self, terms=None, const=0):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}
        self.const = Fraction(const)

    def _coerce(self, other):
        return other if isinstance(other, Lin) else Lin({}, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Lin(t, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return Lin({k: -v for k, v in self.terms.items()}, -self.const)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, c):
        c = Fraction(c)
        return Lin({k: v * c for k, v in self.terms.items()}, self.const * c)

    __rmul__ = __mul__

    def evaluate(self, values):
        missing = set(self.terms) - set(values)
        if missing:
            raise KeyError("unassigned exponents: %s" % ", ".join(sorted(missing)))
        return self.const + sum(v * Fraction(values[k]) for k, v in self.terms.items())

    def __str__(self):
        parts = []
        for k in sorted(self.terms, key=VARIABLES.index):
            c = self.terms[k]
            coef = "" if c == 1 else "-" if c == -1 else str(c) + "*"
            parts.append(coef + k)
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts).replace("+ -", "- ")


def var(name):
    return Lin({name: 1})


alpha, beta, gamma, delta = var("alpha"), var("beta"), var("gamma"), var("delta")
alpha_V, alpha_mm = var("alpha_V"), var("alpha_mm")


@dataclass(frozen=True)
class Constraint:
    """``lhs rel rhs`` stored as ``form rel 0`` with ``form = lhs - rhs``."""
    tag: str
    lhs: Lin
    rel: str
    rhs: Lin

    @property
    def form(self):
        return self.lhs - self.rhs

    def slack(self, values):
        """Signed distance from the boundary, non-negative when satisfied (0 for equalities)."""
        d = self.form.evaluate(values)
        return -d if self.rel in ("<=", "<") else d

    def holds(self, values):
        d = self.form.evaluate(values)
        return {"=": d == 0, ">=": d >= 0, ">": d > 0, "<=": d <= 0, "<": d < 0}[self.rel]

    def __str__(self):
        return "%s %s %s" % (self.lhs, self.rel, self.rhs)


@dataclass
class ExponentSystem:
    variables: tuple
    constraints: list = field(default_factory=list)

    def tags(self):
        return [c.tag for c in self.constraints]

    def find(self, tag):
        return [c for c in self.constraints if c.tag == tag]


def _genrel_pairs():
    """Sector pairs (2k-point, (2k+2)-point) for which the dummy-sum bound is imposed."""
    by_k = {}
    for v, (k, _, _) in VARIABLE_TOPOLOGY.items():
        by_k.setdefault(k, []).append(v)
    return [(lo, hi) for k in sorted(by_k) if k + 1 in by_k for lo in by_k[k] for hi in by_k[k + 1]]


def build_paper_system():
    C = Constraint
    cons = [
        C("rel1", alpha, "=", 2 * beta - gamma),
        C("rel2", 3 * beta, ">=", 2 * gamma + delta + 1),
        C("rel3", 4 * beta, ">=", 3 * gamma + delta + 2),
        C("reldecoupling1", alpha_V, "<", 8 * beta - 5 * gamma - delta),
        C("reldecoupling2", alpha_mm, "<", 8 * beta - 5 * gamma - delta - 2),
        C("reldecoupling3", alpha_V, "<", 8 * beta - 5 * gamma - delta - 1),
        C("beta>=gamma", beta, ">=", gamma),
        C("alphaV<=", alpha_V, "<=", 5 * beta - 3 * gamma - 2),
        C("alphaV>=", alpha_V, ">=", beta + delta),
        C("alphaV>=alphamm", alpha_V, ">=", alpha_mm + 2 * gamma + delta - 3 * beta),
        C("swap-subleading", 3 * beta, ">", 2 * gamma + delta),
        C("ineg", 2 * beta, "=", gamma),
        C("alphamm>=alphaV", alpha_mm, ">=", alpha_V + 2 * gamma + delta - 3 * beta),
        C("alphamm-leading", alpha_mm, "=", alpha_V + 2 * gamma + delta - 3 * beta + 1),
        C("melonic-2pt", 4 * beta, "=", 3 * gamma + delta + 2),
        C("beta>-1", beta, ">", Lin({}, -1)),
        C("alphaV>alphamm", alpha_V, ">", alpha_mm),
        C("alphaK=alphaF-2", var("alpha_K"), "=", var("alpha_F") - 2),
    ]
    for lo, hi in _genrel_pairs():
        cons.append(C("genrel:%s>=%s" % (lo, hi), var(lo), ">=", var(hi) + 2 + 4 * gamma + delta - 6 * beta))
    return ExponentSystem(VARIABLES, cons)


def conjecture_alpha(k, B, g, beta=0):
    """Sector exponent 3 - B - 2g - 2k, shifted by -beta(k + B - 2) away from beta = 0."""
    if k < 1 or B < 1 or g < 0:
        raise ValueError("need k >= 1, B >= 1, g >= 0")
    beta = Fraction(beta)
    return Fraction(3 - B - 2 * g - 2 * k) - beta * (k + B - 2)


@dataclass
class ConstraintReport:
    tag: str
    text: str
    satisfied: bool
    slack: Fraction


@dataclass
class ExponentAssignment:
    values: dict
    report: list = field(default_factory=list)

    @property
    def feasible(self):
        return all(r.satisfied for r in self.report)

    def __getitem__(self, name):
        return self.values[name]

    def alpha_of(self, class_name):
        return self.values[CLASS_VARIABLE[class_name]]

    def violations(self):
        return [r for r in self.report if not r.satisfied]


def evaluate(system, values):
    values = {k: Fraction(v) for k, v in values.items()}
    report = [ConstraintReport(c.tag, str(c), c.holds(values), c.slack(values)) for c in system.constraints]
    return ExponentAssignment(values, report)


def solve(system=None, beta=0):
    """Large-N exponent assignment with beta as the single free parameter."""
    if system is None:
        system = build_paper_system()
    b = Fraction(beta)
    if b <= -1:
        raise InfeasibleError("beta = %s violates beta > -1" % b)
    if b > 0:
        raise InfeasibleError("beta = %s violates 0 > beta > gamma, or beta = gamma = 0" % b)
    g = 2 * b
    values = {"beta": b, "gamma": g, "alpha": 2 * b - g, "delta": -2 - 2 * b, "alpha_V": -2 - b}
    values["alpha_mm"] = values["alpha_V"] + 2 * g + values["delta"] - 3 * b + 1
    for v, (k, B, gen) in VARIABLE_TOPOLOGY.items():
        if v not in values:
            values[v] = conjecture_alpha(k, B, gen, b)
    out = evaluate(system, values)
    if not out.feasible:
        raise InfeasibleError("assignment violates %s" % ", ".join(r.tag for r in out.violations()))
    return out


@dataclass
class VerificationReport:
    constraints: list
    class_checks: list

    @property
    def ok(self):
        return all(r.satisfied for r in self.constraints) and all(c["match"] for c in self.class_checks)

    def failures(self):
        out = [r.tag for r in self.constraints if not r.satisfied]
        out += ["conjecture:" + c["class"] for c in self.class_checks if not c["match"]]
        return out


def verify_assignment(assignment, catalog, system=None):
    """Check the constraints and compare every catalogue class with the conjectured exponent."""
    if system is None:
        system = build_paper_system()
    values = assignment.values if isinstance(assignment, ExponentAssignment) else assignment
    ev = evaluate(system, values)
    b = Fraction(values.get("beta", 0))
    checks = []
    for bc in catalog:
        stored = Fraction(values[CLASS_VARIABLE[bc.name]])
        want = conjecture_alpha(bc.vertex_count // 2, bc.component_count, bc.genus, b)
        checks.append({"class": bc.name, "k": bc.vertex_count // 2, "B": bc.component_count,
                       "g": bc.genus, "alpha": stored, "conjecture": want, "match": stored == want})
    return VerificationReport(ev.report, checks)


def rational_json(q):
    """Integers as ints, other rationals as 'p/q' strings."""
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)
