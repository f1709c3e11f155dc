"""Exact arithmetic in Q and in the real quadratic field Q(sqrt(e)).

Rationals are plain :class:`fractions.Fraction` values.  A :class:`Surd`
stores ``a + b*sqrt(e)`` with rational ``a`` and ``b``; because ``1`` and
``sqrt(e)`` are linearly independent over Q, structural equality is value
equality.  Signs are decided without floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union

from .exceptions import MixedContextError

RatLike = Union[int, Fraction]


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"n"``.  Decimal points are rejected."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def rat_str(x: RatLike) -> str:
    x = as_rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rat_is_square(r: Fraction) -> bool:
    return r >= 0 and is_square(r.numerator) and is_square(r.denominator)


def rat_sqrt(r: Fraction) -> Fraction:
    """Exact square root of a rational perfect square."""
    if not rat_is_square(r):
        raise ValueError(f"{r} is not the square of a rational")
    return Fraction(isqrt(r.numerator), isqrt(r.denominator))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SqrtRat:
    """The nonnegative real number sqrt(radicand)."""

    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radicand", as_rat(self.radicand))
        if self.radicand < 0:
            raise ValueError("radicand must be nonnegative")

    def is_rational(self) -> bool:
        return rat_is_square(self.radicand)

    def exact(self) -> Fraction:
        return rat_sqrt(self.radicand)

    def __float__(self) -> float:
        return float(self.radicand) ** 0.5

    def __str__(self):
        return f"sqrt({rat_str(self.radicand)})"

    def to_json(self) -> dict:
        return {"sqrt": rat_str(self.radicand)}


def cmp_rat_sqrt(r: RatLike, s: SqrtRat) -> int:
    """Order ``r`` against ``sqrt(s.radicand)``: -1, 0 or +1."""
    r = as_rat(r)
    if r < 0:
        return -1
    return _sign(r * r - s.radicand)


@dataclass(frozen=True)
class Surd:
    """``a + b*sqrt(e)`` in Q(sqrt(e)); ``e`` is a positive non-square."""

    a: Fraction
    b: Fraction
    e: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", as_rat(self.b))

    # -- construction -------------------------------------------------
    @classmethod
    def rational(cls, a: RatLike, e: int) -> "Surd":
        return cls(as_rat(a), Fraction(0), e)

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.e != self.e:
                raise MixedContextError(
                    f"cannot combine elements of Q(sqrt({self.e})) and Q(sqrt({other.e}))"
                )
            return other
        return Surd(as_rat(other), Fraction(0), self.e)

    # -- field operations ---------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        return Surd(self.a + o.a, self.b + o.b, self.e)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.e)

    def __sub__(self, other):
        o = self._coerce(other)
        return Surd(self.a - o.a, self.b - o.b, self.e)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Surd):
            r = as_rat(other)
            return Surd(self.a * r, self.b * r, self.e)
        o = self._coerce(other)
        return Surd(self.a * o.a + self.e * self.b * o.b, self.a * o.b + self.b * o.a, self.e)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.e)

    def norm(self) -> Fraction:
        return self.a * self.a - self.e * self.b * self.b

    def inverse(self) -> "Surd":
        n = self.norm()
        if n == 0:
            # norm vanishes only at zero since e is not a square
            raise ZeroDivisionError("division by zero surd")
        return Surd(self.a / n, -self.b / n, self.e)

    def __truediv__(self, other):
        if not isinstance(other, Surd):
            r = as_rat(other)
            if r == 0:
                raise ZeroDivisionError("division by zero")
            return Surd(self.a / r, self.b / r, self.e)
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Surd(Fraction(1), Fraction(0), self.e)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order --------------------------------------------------------
    def sign(self) -> int:
        return surd_sign(self)

    def _cmp(self, other) -> int:
        return surd_sign(self - self._coerce(other))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.e == other.e and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.e))

    # -- conversions --------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.e ** 0.5

    def floor(self) -> int:
        """Exact floor of the real value."""
        bb = self.b * self.b * self.e
        root = isqrt(bb.numerator // bb.denominator)
        guess = int(self.a // 1) + (root if self.b >= 0 else -root - 1)
        while surd_sign(self - guess) < 0:
            guess -= 1
        while surd_sign(self - (guess + 1)) >= 0:
            guess += 1
        return guess

    def ceil(self) -> int:
        return -((-self).floor())

    def __str__(self):
        if self.b == 0:
            return rat_str(self.a)
        sb = "+" if self.b > 0 else "-"
        return f"{rat_str(self.a)}{sb}{rat_str(abs(self.b))}*sqrt({self.e})"

    def to_json(self) -> dict:
        return {"a": rat_str(self.a), "b": rat_str(self.b), "e": self.e}

    @classmethod
    def from_json(cls, obj: dict) -> "Surd":
        return cls(parse_rat(obj["a"]), parse_rat(obj["b"]), int(obj["e"]))


def surd_sign(x: Surd) -> int:
    """Sign of ``x.a + x.b*sqrt(x.e)``, decided by comparing a^2 with b^2*e."""
    sa, sb = _sign(x.a), _sign(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger magnitude wins
    return sa * _sign(x.a * x.a - x.b * x.b * x.e)


def surd_min(x: Surd, y: Surd) -> Surd:
    return x if surd_sign(x - y) <= 0 else y


def surd_max(x: Surd, y: Surd) -> Surd:
    return x if surd_sign(x - y) >= 0 else y


def cmp_surd_sqrt(x: Surd, s: SqrtRat) -> int:
    """Order ``x`` (a surd) against ``sqrt(s.radicand)``."""
    if surd_sign(x) < 0:
        return -1
    return surd_sign(x * x - s.radicand)
