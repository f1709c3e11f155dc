"""Pell bounds, their submaximality intervals, and the finite candidate sets
that make the Seshadri constant computable.

For a rational ``lam = p/q`` with ``sqrt(L_lam^2)`` irrational, the Pell bound is
the linear function ``t -> k*q*(L_lam . L_t)/l`` where ``(l, k)`` is the
fundamental solution of ``x^2 - (q L_lam)^2 y^2 = 1``.  It is an upper bound for
the Seshadri function wherever it lies below ``sqrt(L_t^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterator, List, NamedTuple, Optional

from .exactfield import SqrtRat, Surd, as_rat, cmp_rat_sqrt, is_square, surd_min, surd_sign
from .exceptions import NonpositiveLengthError, NotAmpleError, SquareSelfIntersectionError
from .lattice import OrderSpec, is_ample_ray, nef_interval, ray_square
from .pell import PellSolution, pell1


@dataclass(frozen=True)
class SubmaxInterval:
    """Open interval ``(lo, hi)`` with endpoints in Q(sqrt(e))."""

    lo: Surd
    hi: Surd

    def contains(self, t) -> bool:
        return surd_sign(self.lo - t) < 0 and surd_sign(self.hi - t) > 0

    __contains__ = contains

    def length(self) -> Surd:
        return self.hi - self.lo

    def covers(self, other: "SubmaxInterval") -> bool:
        """Closed containment ``other`` within ``self``."""
        return surd_sign(self.lo - other.lo) <= 0 and surd_sign(other.hi - self.hi) <= 0

    def meets(self, other: "SubmaxInterval") -> bool:
        return surd_sign(self.lo - other.hi) < 0 and surd_sign(other.lo - self.hi) < 0

    def intersect(self, other: "SubmaxInterval") -> Optional["SubmaxInterval"]:
        if not self.meets(other):
            return None
        lo = self.lo if surd_sign(self.lo - other.lo) >= 0 else other.lo
        hi = self.hi if surd_sign(self.hi - other.hi) <= 0 else other.hi
        return SubmaxInterval(lo, hi)

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}


@dataclass(frozen=True)
class PellBound:
    lam: Fraction
    q: int
    pell: PellSolution
    c0: Fraction
    c1: Fraction
    order: OrderSpec = field(repr=False, compare=False)

    @property
    def l(self) -> int:
        return self.pell.x

    @property
    def k(self) -> int:
        return self.pell.y

    @property
    def D(self) -> int:
        return self.pell.D

    def __call__(self, t):
        if isinstance(t, Surd):
            return t * self.c1 + self.c0
        return self.c0 + self.c1 * as_rat(t)

    @property
    def interval(self) -> SubmaxInterval:
        # cached by hand; the dataclass is frozen
        try:
            return self.__dict__["_interval"]
        except KeyError:
            J = submax_interval(self)
            object.__setattr__(self, "_interval", J)
            return J

    def is_submaximal_at(self, t) -> bool:
        """pi(t) < sqrt(L_t^2), for rational t in the ample range."""
        return cmp_rat_sqrt(self(t), SqrtRat(ray_square(t, self.order))) < 0

    def to_json(self) -> dict:
        from .exactfield import rat_str

        return {
            "lambda": rat_str(self.lam),
            "l": self.l,
            "k": self.k,
            "c0": rat_str(self.c0),
            "c1": rat_str(self.c1),
        }


def square_class_D(t, order: OrderSpec) -> int:
    """(q L_t)^2 for the primitive integral class on the ray of L_t."""
    t = as_rat(t)
    p, q = t.numerator, t.denominator
    if order.is_half:
        return 2 * q * q + 2 * p * q + (1 - order.e) // 2 * p * p
    return 2 * q * q - 2 * order.e * p * p


def has_rational_root(t, order: OrderSpec) -> bool:
    """True when sqrt(L_t^2) is rational, i.e. no Pell bound exists at t."""
    return is_square(square_class_D(t, order))


def make_bound(t, order: OrderSpec, pell: PellSolution) -> PellBound:
    """Assemble the Pell bound at ``t`` from an already solved Pell equation."""
    t = as_rat(t)
    q = t.denominator
    g00, g01, g11 = order.form()
    scale = Fraction(pell.y * q, pell.x)
    return PellBound(t, q, pell, scale * (g00 + g01 * t), scale * (g01 + g11 * t), order)


def pell_bound(t, order: OrderSpec) -> PellBound:
    t = as_rat(t)
    if not is_ample_ray(t, order):
        raise NotAmpleError(f"L_t with t={t} is not ample for {order}")
    D = square_class_D(t, order)
    if is_square(D):
        raise SquareSelfIntersectionError(f"(q L_t)^2 = {D} is a square at t={t}; no Pell bound")
    return make_bound(t, order, pell1(D))


def submax_interval(bound: PellBound, order: Optional[OrderSpec] = None) -> SubmaxInterval:
    """Closed-form endpoints of J = {t : pi(t) < sqrt(L_t^2)}."""
    order = order or bound.order
    e = order.e
    l, k, q, lam = bound.l, bound.k, bound.q, bound.lam
    kq2 = k * k * q * q
    if order.is_half:
        den = (e - 1) + 2 * e * kq2
        a = (2 + 2 * e * kq2 * lam) / den
        b = Fraction(2 * l, den)
    else:
        den = e * (2 * kq2 + 1)
        a = 2 * e * kq2 * lam / den
        b = Fraction(l, den)
    return SubmaxInterval(Surd(a, -b, e), Surd(a, b, e))


def qbound_from_length(s, order: OrderSpec) -> int:
    """Largest integer q with q*s*sqrt(e) <= sqrt(11); 0 if none.

    Any Pell bound submaximal on an interval of length ``s`` has denominator at
    most this value.
    """
    e = order.e
    if not isinstance(s, Surd):
        s = Surd.rational(s, e)
    if surd_sign(s) <= 0:
        raise NonpositiveLengthError(f"length must be positive, got {s}")
    ratio = Surd.rational(11, e) / (s * s * e)
    return isqrt(max(ratio.floor(), 0))


class Candidate(NamedTuple):
    mu: Fraction
    usable: bool


def farey_between(lo, hi, n: int) -> Iterator[Fraction]:
    """Reduced fractions a/b with b <= n and lo < a/b < hi, ascending.

    Walks the Farey sequence of order ``n`` using the neighbour recurrence.
    ``lo``/``hi`` may be rationals or surds.
    """
    if n < 1:
        return

    def floor_of(x, b):
        y = x * b
        return y.floor() if isinstance(y, Surd) else (as_rat(y).numerator // as_rat(y).denominator)

    first = min(Fraction(floor_of(lo, b) + 1, b) for b in range(1, n + 1))
    a, b = first.numerator, first.denominator
    # successor c/d: b*c - a*d = 1 with d <= n maximal
    if b == 1:
        d = n
    else:
        d0 = (-pow(a, -1, b)) % b
        d = d0 + b * ((n - d0) // b)
    c = (1 + a * d) // b

    hi_float = float(hi)

    def below_hi(x: Fraction) -> bool:
        # floats settle everything except near-ties
        gap = hi_float - x.numerator / x.denominator
        if abs(gap) > 1e-9 * (1 + abs(hi_float)):
            return gap > 0
        if isinstance(hi, Surd):
            return surd_sign(hi - x) > 0
        return x < hi

    while below_hi(Fraction(a, b)):
        yield Fraction(a, b)
        kk = (n + b) // d
        a, b, c, d = c, d, kk * c - a, kk * d - b


def half_width(bound: PellBound) -> Surd:
    """s(lam) = min(lam - t1, t2 - lam)."""
    J = bound.interval
    return surd_min(J.hi - bound.lam, -(J.lo - bound.lam))


def candidate_set(t, order: OrderSpec) -> List[Candidate]:
    """All mu = a/b in the open nef interval with b <= sqrt(11)/(s(t) sqrt(e)).

    Members whose primitive class has a square self-intersection carry no Pell
    bound and are marked unusable.
    """
    bound = pell_bound(t, order)
    Q = qbound_from_length(half_width(bound), order)
    lo, hi = nef_interval(order)
    return [Candidate(mu, not has_rational_root(mu, order)) for mu in farey_between(lo, hi, Q)]


def interval_by_quadratic(bound: PellBound) -> SubmaxInterval:
    """Endpoints of J by solving pi(t)^2 = L_t^2 as a quadratic in t.

    Independent of the closed-form route in :func:`submax_interval`; used as a
    cross-check.
    """
    order = bound.order
    e = order.e
    g00, g01, g11 = order.form()
    c0, c1 = bound.c0, bound.c1
    # (c0 + c1 t)^2 - (g00 + 2 g01 t + g11 t^2) = 0
    A = c1 * c1 - g11
    B = 2 * c0 * c1 - 2 * g01
    C = c0 * c0 - g00
    disc = B * B - 4 * A * C
    r2 = disc / e
    from .exactfield import rat_sqrt

    r = rat_sqrt(r2)
    root1 = Surd(-B / (2 * A), -r / (2 * A), e)
    root2 = Surd(-B / (2 * A), r / (2 * A), e)
    lo, hi = (root1, root2) if surd_sign(root1 - root2) < 0 else (root2, root1)
    return SubmaxInterval(lo, hi)
