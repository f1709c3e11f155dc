"""The Neron-Severi lattice of a principally polarized abelian surface with
real multiplication, in the basis (L0, Linf).

Classes are written ``a*L0 + b*Linf`` and may have rational coefficients.  The
ray through an ample class with ``a > 0`` is represented by ``L_t = L0 + t*Linf``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple, Tuple

from .exactfield import Surd, as_rat
from .exceptions import BadInputError, NotNormalizableError


class Ring(enum.Enum):
    """Endomorphism ring: Z[sqrt(e)] or Z[1/2 + 1/2 sqrt(e)]."""

    SQRT = "sqrt"
    HALF = "half"


@dataclass(frozen=True)
class OrderSpec:
    ring: Ring
    e: int

    def __post_init__(self):
        ring = self.ring if isinstance(self.ring, Ring) else Ring(self.ring)
        object.__setattr__(self, "ring", ring)
        e = int(self.e)
        if e < 2 or isqrt(e) ** 2 == e:
            raise BadInputError(f"e={e} must be a non-square integer >= 2")
        if ring is Ring.HALF and (e % 4 != 1 or e < 5):
            raise BadInputError(f"ring 'half' needs e = 1 (mod 4) and e >= 5, got e={e}")
        object.__setattr__(self, "e", e)

    @classmethod
    def sqrt(cls, e: int) -> "OrderSpec":
        return cls(Ring.SQRT, e)

    @classmethod
    def half(cls, e: int) -> "OrderSpec":
        return cls(Ring.HALF, e)

    @property
    def is_half(self) -> bool:
        return self.ring is Ring.HALF

    def form(self) -> Tuple[Fraction, Fraction, Fraction]:
        """Gram entries (L0^2, L0.Linf, Linf^2)."""
        if self.is_half:
            return Fraction(2), Fraction(1), Fraction(1 - self.e, 2)
        return Fraction(2), Fraction(0), Fraction(-2 * self.e)

    def __str__(self):
        name = f"Z[sqrt({self.e})]" if not self.is_half else f"Z[1/2+1/2*sqrt({self.e})]"
        return name


class BundleClass(NamedTuple):
    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, a, b) -> "BundleClass":
        return cls(as_rat(a), as_rat(b))

    def __str__(self):
        from .exactfield import rat_str

        return f"{rat_str(self.a)},{rat_str(self.b)}"


def _cls(L) -> BundleClass:
    if isinstance(L, BundleClass):
        return L
    a, b = L
    return BundleClass(as_rat(a), as_rat(b))


def intersection(L, M, order: OrderSpec) -> Fraction:
    L, M = _cls(L), _cls(M)
    g00, g01, g11 = order.form()
    return g00 * L.a * M.a + g01 * (L.a * M.b + L.b * M.a) + g11 * L.b * M.b


def self_intersection(L, order: OrderSpec) -> Fraction:
    return intersection(L, L, order)


def ray_square(t, order: OrderSpec) -> Fraction:
    """L_t^2 for the ray representative L0 + t*Linf."""
    t = as_rat(t)
    g00, g01, g11 = order.form()
    return g00 + 2 * g01 * t + g11 * t * t


def ray_dot(s, t, order: OrderSpec) -> Fraction:
    """L_s . L_t."""
    s, t = as_rat(s), as_rat(t)
    g00, g01, g11 = order.form()
    return g00 + g01 * (s + t) + g11 * s * t


def is_ample(L, order: OrderSpec) -> bool:
    """Ampleness test; the surface contains no elliptic curves, so positivity
    of a and of the quadratic form decides it."""
    L = _cls(L)
    if L.a <= 0:
        return False
    if order.is_half:
        return L.a * L.a + L.a * L.b + Fraction(1 - order.e, 4) * L.b * L.b > 0
    return L.a * L.a - order.e * L.b * L.b > 0


def is_ample_ray(t, order: OrderSpec) -> bool:
    return is_ample((1, t), order)


def nef_interval(order: OrderSpec) -> Tuple[Surd, Surd]:
    """Closed endpoints of the nef cross-section N(X), as surds."""
    e = order.e
    if order.is_half:
        # -2/(sqrt(e)+1) and 2/(sqrt(e)-1), rationalized
        return (
            Surd(Fraction(2, e - 1), Fraction(-2, e - 1), e),
            Surd(Fraction(2, e - 1), Fraction(2, e - 1), e),
        )
    return Surd(0, Fraction(-1, e), e), Surd(0, Fraction(1, e), e)


def normalize(L) -> Tuple[Fraction, Fraction]:
    """Split ``L = scale * L_t``; returns ``(scale, t)``."""
    L = _cls(L)
    if L.a <= 0:
        raise NotNormalizableError(f"class ({L}) has a <= 0; no ray representative")
    return L.a, L.b / L.a


def primitive_and_denominator(t) -> Tuple[int, BundleClass]:
    """Denominator q of t and the primitive integral class q*L_t."""
    t = as_rat(t)
    q = t.denominator
    return q, BundleClass(Fraction(q), Fraction(t.numerator))


def primitive_class(L) -> BundleClass:
    """Primitive integral class on the ray of ``L`` (a > 0 or a = 0 < b)."""
    L = _cls(L)
    den = L.a.denominator * L.b.denominator // gcd(L.a.denominator, L.b.denominator)
    a, b = int(L.a * den), int(L.b * den)
    g = gcd(a, b)
    if g == 0:
        raise ValueError("zero class has no primitive representative")
    return BundleClass(Fraction(a // g), Fraction(b // g))
