"""Isometries of the Neron-Severi lattice that preserve the ample cone, and
with it the Seshadri function.

The group is dihedral: an infinite-order generator moving each principal
polarization to the next one, and an involution fixing ``L0``.  Together they
tile the ample cone by images of one fundamental cone, whose cross-section is
``[0, hi]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactfield import as_rat, rat_str
from .exceptions import InvariantViolation, NotAmpleError
from .lattice import BundleClass, OrderSpec, intersection, is_ample_ray, self_intersection
from .pell import pell1, pell4
from .bounds import pell_bound
from .seshadri import Segment, bounds_near, clip_segments, lower_envelope

GEN, GEN_INV, INVOL = "gen", "gen^-1", "invol"


@dataclass(frozen=True)
class IsometryMatrix:
    """Integer matrix acting on coordinate columns ``(a, b)`` of ``a L0 + b Linf``."""

    rows: Tuple[Tuple[int, int], Tuple[int, int]]

    @classmethod
    def of(cls, m00, m01, m10, m11) -> "IsometryMatrix":
        return cls(((int(m00), int(m01)), (int(m10), int(m11))))

    @property
    def det(self) -> int:
        (p, q), (r, s) = self.rows
        return p * s - q * r

    def __matmul__(self, other: "IsometryMatrix") -> "IsometryMatrix":
        (a, b), (c, d) = self.rows
        (p, q), (r, s) = other.rows
        return IsometryMatrix.of(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)

    def inverse(self) -> "IsometryMatrix":
        (a, b), (c, d) = self.rows
        det = self.det
        if det not in (1, -1):
            raise InvariantViolation(f"matrix {self.rows} is not unimodular")
        return IsometryMatrix.of(d * det, -b * det, -c * det, a * det)

    def __call__(self, L):
        return apply_isometry(self, L)

    def move_ray(self, t):
        """Image of the ray parameter t (rational or surd)."""
        (a, b), (c, d) = self.rows
        return (t * d + c) / (t * b + a)

    def preserves(self, order: OrderSpec) -> bool:
        """Form preservation on the basis plus the ample-cone condition."""
        g00, g01, g11 = order.form()
        (a, b), (c, d) = self.rows
        img0 = BundleClass.of(a, c)
        img1 = BundleClass.of(b, d)
        return (
            self_intersection(img0, order) == g00
            and intersection(img0, img1, order) == g01
            and self_intersection(img1, order) == g11
            and a > 0
        )

    def to_json(self) -> list:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class FundamentalInterval:
    lo: Fraction
    hi: Fraction

    def __contains__(self, t) -> bool:
        return self.lo <= as_rat(t) <= self.hi

    def to_json(self) -> dict:
        return {"lo": rat_str(self.lo), "hi": rat_str(self.hi)}


@dataclass(frozen=True)
class Reduction:
    """``t`` lies in the fundamental interval; ``word`` (first letter first)
    carries the ray of ``L_t`` onto the ray of the original class, and
    ``eps(original L_t) = scale * eps(L_t)``."""

    t: Fraction
    word: Tuple[str, ...]
    scale: Fraction


def _unit(order: OrderSpec) -> Tuple[int, int]:
    if order.is_half:
        x0, y0 = pell4(order.e)
        if not x0 > y0 > 0:
            raise InvariantViolation(f"minimal solution ({x0}, {y0}) of x^2-{order.e}y^2=4 has x <= y")
        return (x0 - y0) // 2, y0
    x0, y0 = pell1(order.e)
    return x0, y0


def generators(order: OrderSpec) -> Tuple[IsometryMatrix, IsometryMatrix]:
    a0, b0 = _unit(order)
    e = order.e
    if order.is_half:
        gen = IsometryMatrix.of(a0, (e - 1) // 4 * b0, b0, a0 + b0)
        invol = IsometryMatrix.of(1, 1, 0, -1)
    else:
        gen = IsometryMatrix.of(a0, e * b0, b0, a0)
        invol = IsometryMatrix.of(1, 0, 0, -1)
    return gen, invol


def apply_isometry(M: IsometryMatrix, L) -> BundleClass:
    L = L if isinstance(L, BundleClass) else BundleClass.of(*L)
    (a, b), (c, d) = M.rows
    return BundleClass(a * L.a + b * L.b, c * L.a + d * L.b)


def word_matrix(word: Sequence[str], order: OrderSpec) -> IsometryMatrix:
    """Matrix of a word; the first letter acts first."""
    gen, invol = generators(order)
    letters = {GEN: gen, GEN_INV: gen.inverse(), INVOL: invol}
    M = IsometryMatrix.of(1, 0, 0, 1)
    for w in word:
        M = letters[w] @ M
    return M


def principal_polarizations(order: OrderSpec, kmin: int, kmax: int) -> List[BundleClass]:
    if kmin > kmax:
        raise ValueError("kmin must not exceed kmax")
    gen, _ = generators(order)
    step = gen if kmin >= 0 else gen.inverse()
    L = BundleClass.of(1, 0)
    for _ in range(abs(kmin)):
        L = apply_isometry(step, L)
    out = [L]
    for _ in range(kmax - kmin):
        L = apply_isometry(gen, L)
        out.append(L)
    return out


def fundamental_interval(order: OrderSpec) -> FundamentalInterval:
    a0, b0 = _unit(order)
    if order.is_half:
        return FundamentalInterval(Fraction(0), Fraction(b0, a0 + 1))
    return FundamentalInterval(Fraction(0), Fraction(a0 - 1, order.e * b0))


def reduce_to_fundamental(t, order: OrderSpec) -> Reduction:
    t = as_rat(t)
    if not is_ample_ray(t, order):
        raise NotAmpleError(f"L_t with t={t} is not ample for {order}")
    gen, invol = generators(order)
    gen_inv = gen.inverse()
    a0, b0 = _unit(order)
    top = Fraction(b0, a0)
    hi = fundamental_interval(order).hi
    steps: List[str] = []
    L = BundleClass.of(1, t)

    def step(name, M):
        nonlocal L
        L = apply_isometry(M, L)
        steps.append(name)

    if L.b < 0:
        step(INVOL, invol)
    while L.b / L.a >= top:
        step(GEN_INV, gen_inv)
    if L.b / L.a > hi:
        step(INVOL, invol)
        step(GEN, gen)
    inverse = {GEN: GEN_INV, GEN_INV: GEN, INVOL: INVOL}
    word = tuple(inverse[s] for s in reversed(steps))
    # steps(L_t) = a * L_{t'}, so eps(L_t) = a * eps(L_{t'})
    return Reduction(L.b / L.a, word, L.a)


def tile_matrices(order: OrderSpec, lo, hi) -> List[IsometryMatrix]:
    """Group elements whose image of the fundamental interval meets [lo, hi]."""
    gen, invol = generators(order)
    fi = fundamental_interval(order)
    lo, hi = as_rat(lo), as_rat(hi)
    out = []
    for sign in (1, -1):
        g = gen if sign > 0 else gen.inverse()
        P = IsometryMatrix.of(1, 0, 0, 1) if sign > 0 else g
        while True:
            spans = []
            for M in (P, P @ invol):
                x, y = sorted((M.move_ray(fi.lo), M.move_ray(fi.hi)))
                spans.append((x, y))
                if x <= hi and y >= lo:
                    out.append(M)
            # tiles march towards the boundary of the nef interval
            if sign > 0 and min(x for x, _ in spans) > hi:
                break
            if sign < 0 and max(y for _, y in spans) < lo:
                break
            P = g @ P
    return out


def extend_by_group(lo, hi, qmax: int, order: OrderSpec, workers: int = 1) -> List[Segment]:
    """Segments on [lo, hi] obtained by sweeping the fundamental interval at
    resolution qmax and transporting the certified bounds with the group."""
    fi = fundamental_interval(order)
    base = bounds_near(fi.lo, fi.hi, qmax, order, workers)
    moved = {}
    for M in tile_matrices(order, lo, hi):
        for bd in base:
            lam = M.move_ray(bd.lam)
            if lam not in moved and is_ample_ray(lam, order):
                # isometries keep Pell data and certification
                moved[lam] = pell_bound(lam, order)
    bounds = sorted(moved.values(), key=lambda b: b.lam)
    return clip_segments(lower_envelope(bounds, order), lo, hi, order)
