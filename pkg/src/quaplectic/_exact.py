"""Exact complex-rational scalars.

Structure constants of the algebra live in Q(i), so every symbolic
computation in :mod:`quaplectic.algebra` runs over pairs of
:class:`fractions.Fraction`.  Floats are deliberately rejected: feeding one
in would silently destroy the exactness guarantee of the Jacobi scans.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"exact scalar expected int or Fraction, got {type(value).__name__}")


class CF:
    """Complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _coerce(re)
        self.im = _coerce(im)

    def __add__(self, other: "CF") -> "CF":
        return CF(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CF") -> "CF":
        return CF(self.re - other.re, self.im - other.im)

    def __mul__(self, other) -> "CF":
        if isinstance(other, CF):
            return CF(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        f = _coerce(other)
        return CF(self.re * f, self.im * f)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CF":
        if isinstance(other, CF):
            den = other.re * other.re + other.im * other.im
            if den == 0:
                raise ZeroDivisionError("division by zero CF")
            return CF(
                (self.re * other.re + self.im * other.im) / den,
                (self.im * other.re - self.re * other.im) / den,
            )
        f = _coerce(other)
        return CF(self.re / f, self.im / f)

    def __neg__(self) -> "CF":
        return CF(-self.re, -self.im)

    def conj(self) -> "CF":
        return CF(self.re, -self.im)

    def times_i(self) -> "CF":
        """Multiplication by the imaginary unit."""
        return CF(-self.im, self.re)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, CF):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}*i"
        return f"({self.re} + {self.im}*i)"


CF_ZERO = CF(0)
CF_ONE = CF(1)
CF_I = CF(0, 1)
