"""Exact numbers: rationals and the quadratic field Q(sqrt 2).

Singlet correlations at multiples of pi/4 only ever need cosines in
{0, +-1, +-sqrt(2)/2}, so every quantity in this package is either a
``Fraction`` or a ``QSqrt2``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union


class QSqrt2:
    """The number ``a + b*sqrt(2)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, value) -> "QSqrt2":
        if isinstance(value, QSqrt2):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value, 0)
        raise TypeError(f"cannot coerce {value!r} to QSqrt2")

    def simplify(self) -> Union[Fraction, "QSqrt2"]:
        return self.a if self.b == 0 else self

    def __add__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QSqrt2.coerce(other)
        norm = o.a * o.a - 2 * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return self * QSqrt2(o.a / norm, -o.b / norm)

    def __rtruediv__(self, other):
        return QSqrt2.coerce(other) / self

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 2 b^2
        lhs, rhs = self.a * self.a, 2 * self.b * self.b
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2)

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self):
        return format_number(self)


Number = Union[Fraction, QSqrt2]


def format_number(x) -> str:
    """Serialize as ``p/q`` or ``(p+q*sqrt2)/r``."""
    if isinstance(x, QSqrt2):
        if x.b == 0:
            return format_number(x.a)
        r = math.lcm(x.a.denominator, x.b.denominator)
        p = int(x.a * r)
        q = int(x.b * r)
        sign = "+" if q >= 0 else "-"
        return f"({p}{sign}{abs(q)}*sqrt2)/{r}"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


_SQRT2_RE = re.compile(r"^\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt2\s*\)\s*/\s*(\d+)$")
_FRAC_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_number(text: str) -> Number:
    """Inverse of :func:`format_number`; also accepts bare integers."""
    text = text.strip()
    m = _SQRT2_RE.match(text)
    if m:
        p, sign, q, r = m.groups()
        qv = int(q) if sign == "+" else -int(q)
        out = QSqrt2(Fraction(int(p), int(r)), Fraction(qv, int(r)))
        return out.simplify()
    if _FRAC_RE.match(text):
        value = Fraction(text)
        return value
    raise ValueError(f"not an exact number: {text!r}")


def cos_quarter_pi(k: int) -> Number:
    """cos(k*pi/4), exactly."""
    half = Fraction(1, 2)
    table = {
        0: Fraction(1),
        1: QSqrt2(0, half),
        2: Fraction(0),
        3: QSqrt2(0, -half),
        4: Fraction(-1),
        5: QSqrt2(0, -half),
        6: Fraction(0),
        7: QSqrt2(0, half),
    }
    return table[k % 8]
