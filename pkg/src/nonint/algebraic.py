"""Exact arithmetic in a quadratic extension Q(t), t**2 = d, d a non-square rational.

With ``d = -omega**2`` the generator ``t`` plays the role of ``i*omega``; this is
what makes the fold-Hopf coefficients of an exact-rational field computable
without rounding. ``conjugate`` is the automorphism ``t -> -t``.
"""

from __future__ import annotations

import math
from fractions import Fraction


class QuadElem:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=-1):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)

    def _lift(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise ValueError("mixing elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        out = QuadElem(1, 0, self.d)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElem):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def __complex__(self) -> complex:
        if self.d < 0:
            return complex(float(self.a), float(self.b) * math.sqrt(float(-self.d)))
        return complex(float(self.a) + float(self.b) * math.sqrt(float(self.d)))

    def real_part(self) -> Fraction:
        """Real part when ``t`` is imaginary (``d < 0``)."""
        return self.a

    def imag_over_sqrt(self) -> Fraction:
        """Coefficient ``b`` with ``Im = b * sqrt(-d)`` when ``d < 0``."""
        return self.b

    def __repr__(self):
        return f"QuadElem({self.a} + {self.b}*t, t^2={self.d})"


def is_rational_square(x: Fraction) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    return _isqrt_exact(x.numerator) is not None and _isqrt_exact(x.denominator) is not None


def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    a, b = _isqrt_exact(x.numerator), _isqrt_exact(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def to_complex(z) -> complex:
    if isinstance(z, QuadElem):
        return complex(z)
    return complex(z)

