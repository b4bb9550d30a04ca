"""Finite-N Schwinger-Dyson right-hand sides, for residual checks.

Momenta are integer triples (i1, i2, i3), 1 <= i <= N, standing for i/N.
A correlator provider exposes ``n``, ``g2(x)``, ``g4(label, x, y)`` and
``g6(label, x, y, z)`` (labels are catalogue class names) and returns
sector-normalised values, possibly truncated series.  Correlators are
requested at coincident momenta too: such configurations keep the sector
label (and hence the power of N) of the term they come from.

Powers of N are read from the exponent assignment at run time, so a wrong
assignment shows up as a non-zero residual.
"""
from fractions import Fraction

from .series import TruncatedSeries
from .wick import int_power, replace

SECTORS = ("2pt", "4pt_V1", "4pt_m")
F_CLASSES = ("m", "V_a", "V_b", "V_c", "m|m")


class MissingSectorError(LookupError):
    """The correlator provider cannot supply a sector an equation needs."""


def others(a):
    """The two colours different from a, ascending."""
    return tuple(c for c in (1, 2, 3) if c != a)


def assemble(parts):
    """Triple from a {colour: component} map, in ascending colour order."""
    if sorted(parts) != [1, 2, 3]:
        raise ValueError("need exactly one component per colour, got %s" % sorted(parts))
    return tuple(parts[c] for c in (1, 2, 3))


def sq(n, p):
    return Fraction(sum(i * i for i in p), n * n)


def sq1(n, i):
    return Fraction(i * i, n * n)


class Powers:
    """N**(linear combination of exponents), exact."""

    def __init__(self, n, exponents):
        self.n = n
        self.e = {k: Fraction(v) for k, v in exponents.items()}

    def __call__(self, **coeffs):
        const = coeffs.pop("const", 0)
        total = Fraction(const)
        for k, c in coeffs.items():
            total += c * self.e[k]
        return int_power(self.n, total)


def _zero_like(provider):
    order = getattr(provider, "order", None)
    return TruncatedSeries([0] * (order + 1)) if order is not None else 0


def _lam(provider):
    order = getattr(provider, "order", None)
    if order is None:
        raise ValueError("finite-N right-hand sides need a series-valued provider (with an 'order')")
    return TruncatedSeries.variable(order, Fraction(1))


def _g6(provider, label, x, y, z):
    fn = getattr(provider, "g6", None)
    if fn is None:
        raise MissingSectorError("provider has no 6-point sector %s" % label)
    return fn(label, x, y, z)


def _g4(provider, label, x, y):
    fn = getattr(provider, "g4", None)
    if fn is None:
        raise MissingSectorError("provider has no 4-point sector %s" % label)
    return fn(label, x, y)


# -- f-functions ---------------------------------------------------------------

def _cyclic(f, u, v, w):
    return f(u, v, w) + f(w, u, v) + f(v, w, u)


def f_melon(provider, a, s_a, x, pw=None):
    """Y-term coefficient on the melon for colour a at fixed s_a != x_a.

    Sums run over dummy components different from those of x, so each
    configuration is counted once with the power of N of its sector.
    """
    n = provider.n
    b, c = others(a)
    pw = pw or (lambda **k: 1)
    total = _g4(provider, "V_%d" % a, x, assemble({a: s_a, b: x[b - 1], c: x[c - 1]})) * pw(alpha_V=1)
    acc = _zero_like(provider)
    for cp in (b, c):
        bb = b if cp == c else c
        for q in range(1, n + 1):
            if q == x[bb - 1]:
                continue
            acc = acc + _g4(provider, "V_%d" % cp, x, assemble({a: s_a, bb: q, cp: x[cp - 1]}))
    total = total + acc * (pw(alpha_V=1, const=1) / n)
    acc = _zero_like(provider)
    for qb in range(1, n + 1):
        if qb == x[b - 1]:
            continue
        for qc in range(1, n + 1):
            if qc == x[c - 1]:
                continue
            acc = acc + _g4(provider, "m|m", x, assemble({a: s_a, b: qb, c: qc}))
    return total + acc * (pw(alpha_mm=1, const=2) / (n * n))


def f_pillow_same(provider, a, s_a, x, y):
    """Y-term coefficient on the pillow of colour a, super-index a."""
    n = provider.n
    b, c = others(a)
    G = lambda label, u, v, w: _g6(provider, label, u, v, w)
    third = Fraction(1, 3)
    t1 = _cyclic(lambda u, v, w: G("G_%d" % a, u, v, w), assemble({a: s_a, b: x[b - 1], c: x[c - 1]}), x, y)
    t2 = _cyclic(lambda u, v, w: G("K", u, v, w), assemble({a: s_a, b: x[b - 1], c: y[c - 1]}), x, y)
    out = (t1 + t2) * third
    for q in range(1, n + 1):
        out = out + G(_f_label(b, a, c), x, y, assemble({a: s_a, b: q, c: y[c - 1]}))
        out = out + G(_f_label(c, a, b), x, y, assemble({a: s_a, c: q, b: y[b - 1]}))
    half = Fraction(1, 2)
    for qb in range(1, n + 1):
        for qc in range(1, n + 1):
            out = out + G("m|V_%d" % a, assemble({a: s_a, b: qb, c: qc}), x, y) * half
    return out


def f_pillow_other(provider, a, g, s_a, x, y):
    """Y-term coefficient on the pillow of colour g != a, super-index a.

    With {a, b, c} = {1, 2, 3} and b < c, the colour g plays the role of b
    or c in the two displayed forms.
    """
    n = provider.n
    b, c = others(a)
    G = lambda label, u, v, w: _g6(provider, label, u, v, w)
    third, half = Fraction(1, 3), Fraction(1, 2)
    out = _zero_like(provider)
    for q in range(1, n + 1):
        if g == b:
            w = assemble({a: s_a, b: q, c: y[c - 1]})
        else:
            w = assemble({a: s_a, b: y[b - 1], c: q})
        out = out + _cyclic(lambda u, v, z: G("G_%d" % g, u, v, z), w, x, y) * third
    fc = _f_label(c, a, b)
    out = out + G(fc, assemble({a: s_a, b: y[b - 1], c: x[c - 1]}), x, y)
    out = out + G(fc, x, assemble({a: s_a, b: x[b - 1], c: x[c - 1]}), y)
    fa = _f_label(a, b, c)
    for q in range(1, n + 1):
        if g == b:
            out = out + G(fa, x, y, assemble({a: s_a, b: q, c: y[c - 1]}))
        else:
            out = out + G(fa, x, assemble({a: s_a, b: x[b - 1], c: q}), y)
    for qb in range(1, n + 1):
        for qc in range(1, n + 1):
            out = out + G("m|V_%d" % g, assemble({a: s_a, b: qb, c: qc}), x, y) * half
    return out


def f_double_melon(provider, a, s_a, x, y):
    """Y-term coefficient on m|m for colour a."""
    n = provider.n
    b, c = others(a)
    G = lambda label, u, v, w: _g6(provider, label, u, v, w)
    out = _zero_like(provider)
    for qb in range(1, n + 1):
        for qc in range(1, n + 1):
            out = out + _cyclic(lambda u, v, w: G("m|m|m", u, v, w), assemble({a: s_a, b: qb, c: qc}), x, y)
    out = out + G(_f_label(a, b, c), x, assemble({a: s_a, b: x[b - 1], c: y[c - 1]}), y)
    out = out + G("m|V_%d" % a, x, assemble({a: s_a, b: y[b - 1], c: y[c - 1]}), y)
    for q in range(1, n + 1):
        out = out + G("m|V_%d" % b, x, assemble({a: s_a, b: y[b - 1], c: q}), y)
        out = out + G("m|V_%d" % c, x, assemble({a: s_a, b: q, c: y[c - 1]}), y)
        out = out + G("m|V_%d" % b, x, y, assemble({a: s_a, b: y[b - 1], c: q}))
        out = out + G("m|V_%d" % c, x, y, assemble({a: s_a, b: q, c: y[c - 1]}))
    out = out + G("m|V_%d" % a, x, y, assemble({a: s_a, b: y[b - 1], c: y[c - 1]}))
    return out


def _f_label(first, *rest):
    lo, hi = sorted(rest)
    return "F_{%d;%d%d}" % (first, lo, hi)


def assemble_f(kind, a, s_a, args, provider, graph_color=None, symmetrize=True, powers=None):
    """Y-term coefficient for one of the classes m, V_a, V_b, V_c, m|m.

    ``args`` is (x,) for the melon and (x, y) otherwise.  Pillow and m|m
    values are symmetrised over the automorphism group (x <-> y) unless
    ``symmetrize`` is false.  ``graph_color`` names the pillow colour for
    V_b / V_c (default: the smaller or larger colour different from a).
    """
    if kind == "m":
        (x,) = args
        return f_melon(provider, a, s_a, x, powers)
    x, y = args
    if kind == "V_a":
        f = lambda u, v: f_pillow_same(provider, a, s_a, u, v)
    elif kind in ("V_b", "V_c"):
        b, c = others(a)
        g = graph_color or (b if kind == "V_b" else c)
        if g == a:
            raise ValueError("graph colour must differ from the super-index")
        f = lambda u, v: f_pillow_other(provider, a, g, s_a, u, v)
    elif kind == "m|m":
        f = lambda u, v: f_double_melon(provider, a, s_a, u, v)
    else:
        raise ValueError("unknown f-function class %r" % (kind,))
    return f(x, y) + f(y, x) if symmetrize else f(x, y)


def f_for_graph(provider, a, s_a, x, y, color):
    """Symmetrised coefficient on the pillow V_color with super-index a."""
    if color == a:
        return assemble_f("V_a", a, s_a, (x, y), provider)
    return assemble_f("V_b", a, s_a, (x, y), provider, graph_color=color)


# -- right-hand sides ----------------------------------------------------------

def two_point_terms(provider, exponents, x):
    """The bracketed terms of the 2-point equation, summed over colours, with their powers of N.

    Keys: ``pairing`` (Gaussian pairings), ``v_diag`` (pillow cumulant at y = x),
    ``v_line`` (pillow cumulants with one shifted component), ``mm`` (the m|m
    sector), ``wti`` (the difference-quotient sum).  Works for exact series and
    for plain floats.
    """
    n = provider.n
    pw = Powers(n, exponents)
    gx = provider.g2(x)
    out = dict.fromkeys(("pairing", "v_diag", "v_line", "mm", "wti"), _zero_like(provider))
    for a in (1, 2, 3):
        b, c = others(a)
        acc = gx * gx
        for qb in range(1, n + 1):
            for qc in range(1, n + 1):
                acc = acc + provider.g2(assemble({a: x[a - 1], b: qb, c: qc})) * gx
        out["pairing"] = out["pairing"] + acc * (pw(gamma=3, delta=1, beta=-4, const=2) / (n * n))
        out["v_diag"] = out["v_diag"] + _g4(provider, "V_%d" % a, x, x) * pw(alpha_V=1, beta=-8, gamma=5, delta=1)
        acc = _zero_like(provider)
        for bb, cc in ((b, c), (c, b)):
            for q in range(1, n + 1):
                if q != x[bb - 1]:
                    acc = acc + _g4(provider, "V_%d" % cc, x, replace(x, bb, q))
        out["v_line"] = out["v_line"] + acc * (pw(alpha_V=1, const=1, beta=-8, gamma=5, delta=1) / n)
        acc = _zero_like(provider)
        for qb in range(1, n + 1):
            for qc in range(1, n + 1):
                if qb != x[b - 1] and qc != x[c - 1]:
                    acc = acc + _g4(provider, "m|m", assemble({a: x[a - 1], b: qb, c: qc}), x)
        out["mm"] = out["mm"] + acc * (pw(alpha_mm=1, const=2, beta=-8, gamma=5, delta=1) / (n * n))
        acc = _zero_like(provider)
        for q in range(1, n + 1):
            if q != x[a - 1]:
                acc = acc + (provider.g2(replace(x, a, q)) - gx) * (1 / (sq1(n, x[a - 1]) - sq1(n, q)))
        out["wti"] = out["wti"] + acc * (pw(gamma=2, delta=1, const=1, beta=-3) / n)
    return out


FOUR_POINT_TERMS = ("v_diag", "v_line", "mm")


def rhs_2pt(provider, exponents, x):
    """Right-hand side of the 2-point equation at the grid point x."""
    n = provider.n
    free = Powers(n, exponents)(beta=2, gamma=-1, alpha=-1) / sq(n, x)
    terms = two_point_terms(provider, exponents, x)
    total = _zero_like(provider)
    for v in terms.values():
        total = total + v
    return total * (-2 / sq(n, x)) * _lam(provider) + free


def subleading_four_point(provider, exponents, x, lam):
    """Contribution of the 4-point sectors to the 2-point right-hand side (numeric coupling)."""
    terms = two_point_terms(provider, exponents, x)
    total = sum(terms[k] for k in FOUR_POINT_TERMS)
    return -2 * lam / float(sq(provider.n, x)) * total


def rhs_4pt_v1(provider, exponents, x, y, include_f=True):
    """Right-hand side of the connected 4-point equation on V_1 at whites x, y."""
    n = provider.n
    if any(x[c] == y[c] for c in range(3)):
        raise ValueError("the V_1 equation needs x and y distinct in every colour")
    pw = Powers(n, exponents)
    lam = _lam(provider)
    s = (x[0], y[1], y[2])
    t = (y[0], x[1], x[2])
    g4 = lambda label, u, v: _g4(provider, label, u, v)
    lhs_val = g4("V_1", x, y)
    total = _zero_like(provider)

    p1 = pw(gamma=3, delta=1, beta=-4, const=2) / (n * n)
    acc = lhs_val * (3 * provider.g2(s) + provider.g2(x) + 2 * provider.g2(y))
    for a in (1, 2, 3):
        b, c = others(a)
        for qb in range(1, n + 1):
            for qc in range(1, n + 1):
                acc = acc + provider.g2(assemble({a: s[a - 1], b: qb, c: qc})) * lhs_val
    total = total + acc * p1

    d = pw(gamma=2, delta=1, const=1, beta=-3) / n
    acc = _zero_like(provider)
    for a in (1, 2, 3):
        # the white carrying s_a: x for colour 1, y for colours 2 and 3
        w = x if a == 1 else y
        other = y if a == 1 else x
        for bval in range(1, n + 1):
            if bval == w[a - 1]:
                continue
            den = sq1(n, bval) - sq1(n, w[a - 1])
            acc = acc + lhs_val * (1 / den)
            if bval == other[a - 1]:
                continue
            moved = replace(w, a, bval)
            val = g4("V_1", moved, y) if a == 1 else g4("V_1", x, moved)
            acc = acc - val * (1 / den)
    total = total + acc * d

    sw = pw(gamma=2, delta=1, beta=-3)
    total = total + (g4("V_3", x, (y[0], x[1], y[2])) - g4("V_3", x, y)) * (sw / (sq1(n, y[1]) - sq1(n, x[1])))
    total = total + (g4("V_2", x, (y[0], y[1], x[2])) - g4("V_2", x, y)) * (sw / (sq1(n, y[2]) - sq1(n, x[2])))

    dq = 1 / (sq1(n, y[0]) - sq1(n, x[0]))
    total = total + provider.g2(y) * (provider.g2(x) - provider.g2(t)) * (
        pw(gamma=2, delta=1, beta=-3, alpha=2, alpha_V=-1) * dq)
    total = total + (g4("m|m", x, y) - g4("m|m", t, y)) * (
        pw(gamma=2, delta=1, beta=-3, alpha_mm=1, alpha_V=-1) * dq)

    if include_f:
        fsum = _zero_like(provider)
        for a in (1, 2, 3):
            fsum = fsum + f_for_graph(provider, a, s[a - 1], x, y, 1)
        total = total + fsum * pw(gamma=4, delta=1, beta=-6, alpha_V=-1)
    return total * (-2 / sq(n, s)) * lam


def rhs_4pt_m(provider, exponents, x, y, include_f=True):
    """Right-hand side of the disconnected 4-point equation at whites x, y."""
    n = provider.n
    if any(x[c] == y[c] for c in range(3)):
        raise ValueError("the m|m equation needs x and y distinct in every colour")
    pw = Powers(n, exponents)
    lam = _lam(provider)
    g4 = lambda label, u, v: _g4(provider, label, u, v)
    lhs_val = g4("m|m", x, y)
    gx = provider.g2(x)
    total = _zero_like(provider)
    m1 = pw(beta=-4, gamma=3, delta=1, const=2) / (n * n)
    m3 = pw(gamma=2, delta=1, beta=-3, const=1) / n
    m4 = pw(alpha_V=1, gamma=2, delta=1, beta=-3, alpha_mm=-1)
    m5 = pw(gamma=3, delta=1, beta=-4, alpha_mm=-1)
    for a in (1, 2, 3):
        b, c = others(a)
        acc = gx * 2
        for qb in range(1, n + 1):
            for qc in range(1, n + 1):
                acc = acc + provider.g2(assemble({a: x[a - 1], b: qb, c: qc}))
        total = total + acc * lhs_val * m1
        if include_f:
            ff = assemble_f("m|m", a, x[a - 1], (x, y), provider)
            total = total + ff * pw(gamma=4, delta=1, beta=-6, alpha_mm=-1)
        acc = _zero_like(provider)
        for q in range(1, n + 1):
            if q == x[a - 1]:
                continue
            den = 1 / (sq1(n, x[a - 1]) - sq1(n, q))
            acc = acc - lhs_val * den
            if q != y[a - 1]:
                acc = acc + g4("m|m", replace(x, a, q), y) * den
        total = total + acc * m3
        lab = "V_%d" % a
        total = total + (g4(lab, x, y) - g4(lab, replace(x, a, y[a - 1]), y)) * (
            m4 / (sq1(n, y[a - 1]) - sq1(n, x[a - 1])))
        total = total + gx * f_melon(provider, a, x[a - 1], y, pw) * m5
    return total * (-2 / sq(n, x)) * lam


def lhs(sector, provider, args):
    if sector == "2pt":
        return provider.g2(args[0])
    if sector == "4pt_V1":
        return provider.g4("V_1", *args)
    if sector == "4pt_m":
        return provider.g4("m|m", *args)
    raise ValueError("unknown sector %r" % (sector,))


def finite_n_sde_rhs(sector, exponents, provider, args, include_f=True):
    """Full right-hand side of the finite-N equation for the sector at ``args``."""
    if hasattr(exponents, "values") and not isinstance(exponents, dict):
        exponents = exponents.values
    if sector == "2pt":
        return rhs_2pt(provider, exponents, args[0])
    if sector == "4pt_V1":
        return rhs_4pt_v1(provider, exponents, args[0], args[1], include_f)
    if sector == "4pt_m":
        return rhs_4pt_m(provider, exponents, args[0], args[1], include_f)
    raise ValueError("unknown sector %r" % (sector,))
