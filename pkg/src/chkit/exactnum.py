"""Exact arithmetic in the field Q(sqrt2, i).

A scalar is a + b*sqrt2 + (c + d*sqrt2)*i with rational a, b, c, d.  The
field is closed under every construction used by the rest of the package
(rational ray components, +-i components, sqrt2 normalizations), equality
is decidable, and there is no tolerance anywhere: is_zero means all four
components are exactly zero.

Floats are rejected outright; lossy imports are a CLI concern.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_R0 = Fraction(0)
_R1 = Fraction(1)


def _as_rational(x: int | str | Fraction) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(
        f"exact component must be int, str or Fraction, not {type(x).__name__}"
    )


@dataclass(frozen=True, slots=True)
class Scalar:
    """An element a + b*sqrt2 + (c + d*sqrt2)*i of Q(sqrt2, i)."""

    a: Fraction = _R0
    b: Fraction = _R0
    c: Fraction = _R0
    d: Fraction = _R0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _as_rational(self.a))
        object.__setattr__(self, "b", _as_rational(self.b))
        object.__setattr__(self, "c", _as_rational(self.c))
        object.__setattr__(self, "d", _as_rational(self.d))

    @classmethod
    def of(cls, x: Scalar | int | str | Fraction) -> Scalar:
        if isinstance(x, Scalar):
            return x
        return cls(_as_rational(x))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_real(self) -> bool:
        return self.c == 0 and self.d == 0

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.a

    def as_integer(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return f.numerator

    def conj(self) -> Scalar:
        return Scalar(self.a, self.b, -self.c, -self.d)

    def __neg__(self) -> Scalar:
        return Scalar(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other: Scalar | int | Fraction) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other: Scalar | int | Fraction) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other: Scalar | int | Fraction) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Scalar | int | Fraction) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        if c1 == 0 and d1 == 0 and c2 == 0 and d2 == 0:
            # real * real, by far the most common case
            return Scalar(a1 * a2 + 2 * (b1 * b2), a1 * b2 + b1 * a2)
        # (r1 + s1*i)(r2 + s2*i) with r, s in Q(sqrt2), using (sqrt2)^2 = 2, i^2 = -1
        return Scalar(
            a1 * a2 + 2 * (b1 * b2) - c1 * c2 - 2 * (d1 * d2),
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        w = self.conj()
        n = self * w  # = |self|^2, real: n.c = n.d = 0
        p, q = n.a, n.b
        den = p * p - 2 * (q * q)  # zero only when p = q = 0, i.e. self = 0
        return w * Scalar(p / den, -q / den)

    def __truediv__(self, other: Scalar | int | Fraction) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other: Scalar | int | Fraction) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def abs_squared(self) -> Scalar:
        return self * self.conj()

    def sort_key(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def to_strings(self) -> list[str]:
        return [str(self.a), str(self.b), str(self.c), str(self.d)]

    @classmethod
    def from_strings(cls, parts: list[str]) -> Scalar:
        if len(parts) != 4:
            raise ValueError(f"scalar encoding needs 4 components, got {len(parts)}")
        return cls(*(Fraction(p) for p in parts))

    def __str__(self) -> str:
        real = _format_pair(self.a, self.b)
        if self.c == 0 and self.d == 0:
            return real
        inner = _format_pair(self.c, self.d)
        if inner == "1":
            imag = "i"
        elif inner == "-1":
            imag = "-i"
        elif "+" in inner[1:] or "-" in inner[1:]:
            imag = f"({inner})i"
        else:
            imag = f"{inner}i"
        if self.a == 0 and self.b == 0:
            return imag
        return f"{real}+{imag}" if not imag.startswith("-") else f"{real}{imag}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _coerce(x: object) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return None


def _format_pair(p: Fraction, q: Fraction) -> str:
    # p + q*sqrt2 with zero terms dropped
    if q == 0:
        return str(p)
    root = "√2" if abs(q) == 1 else f"{abs(q)}√2"
    sign = "-" if q < 0 else ""
    if p == 0:
        return f"{sign}{root}"
    return f"{p}+{root}" if q > 0 else f"{p}-{root}"


ZERO = Scalar()
ONE = Scalar(_R1)
SQRT2 = Scalar(_R0, _R1)
IM = Scalar(_R0, _R0, _R1)
