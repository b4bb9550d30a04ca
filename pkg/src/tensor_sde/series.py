"""Power series in the coupling, truncated at a fixed order.

Coefficients may be ``Fraction`` (exact) or ``float``.  Arithmetic between
two series truncates at the smaller order; scalars are promoted.
"""
from fractions import Fraction
from numbers import Number


class TruncatedSeries:
    """c[0] + c[1] t + ... + c[K] t**K  (mod t**(K+1))."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        coeffs = coeffs[: order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, value, order):
        return cls([value], order)

    @classmethod
    def variable(cls, order, one=1):
        """The coupling itself, t."""
        return cls([0, one], order)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Number):
            return TruncatedSeries([other], self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: k + 1], other.coeffs)], k)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return TruncatedSeries([a * other for a in self.coeffs])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(k + 1):
            s = 0
            for i in range(n + 1):
                if a[i] and b[n - i]:
                    s += a[i] * b[n - i]
            out.append(s)
        return TruncatedSeries(out, k)

    __rmul__ = __mul__

    def reciprocal(self):
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        inv0 = Fraction(1, 1) / c0 if isinstance(c0, (int, Fraction)) else 1.0 / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            s = 0
            for i in range(1, n + 1):
                s += self.coeffs[i] * out[n - i]
            out.append(-s * inv0)
        return TruncatedSeries(out)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Number):
            return TruncatedSeries([a / other for a in self.coeffs])
        return NotImplemented

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = TruncatedSeries([1], self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        k = min(self.order, other.order)
        return self.coeffs[: k + 1] == other.coeffs[: k + 1]

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, order):
        return TruncatedSeries(self.coeffs, min(order, self.order))

    def evaluate(self, t):
        s = 0
        for c in reversed(self.coeffs):
            s = s * t + c
        return s

    def leading_order(self):
        """Index of the first non-zero coefficient, or None."""
        for n, c in enumerate(self.coeffs):
            if c != 0:
                return n
        return None

    def __repr__(self):
        return "TruncatedSeries(%r)" % (list(self.coeffs),)


def coefficient(value, n):
    """n-th coefficient of a series, or of a plain number (treated as constant)."""
    if isinstance(value, TruncatedSeries):
        return value[n] if n <= value.order else 0
    return value if n == 0 else 0
