"""Exact Seshadri constants, curve certificates and the segment structure of
the Seshadri function on the cross-section ``t -> L_t``.

The minimisation over Pell bounds is organised around one observation: for an
ample ``L_lam`` and a value ``v < sqrt(L_lam^2)`` a class ``M`` can only give a
Pell bound ``k (M.L_lam)/l <= v`` at ``lam`` if

    (M.L_lam)^2 - v^2 M^2 <= v^2 / k^2 <= v^2.

The left side is a positive definite binary quadratic form in ``M`` (Hodge
index), so the admissible classes fill an explicit ellipse, and for each class
the Pell ``k`` is bounded as well.  Both facts keep the search finite and small
without changing its result.
"""
from __future__ import annotations

import functools
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from .bounds import (
    PellBound,
    SubmaxInterval,
    farey_between,
    has_rational_root,
    make_bound,
    pell_bound,
    qbound_from_length,
    square_class_D,
)
from .exactfield import SqrtRat, Surd, as_rat, cmp_rat_sqrt, is_square, surd_sign
from .exceptions import InvalidRangeError, NotAmpleError
from .lattice import BundleClass, OrderSpec, is_ample, is_ample_ray, nef_interval, normalize, ray_square
from .pell import PellSolution, norm_solutions, pell1_bounded

SUBMAXIMAL = "Submaximal"
MAXBOUND = "MaxBound"


@dataclass(frozen=True)
class SeshadriResult:
    t: Fraction
    value: Union[Fraction, SqrtRat]
    kind: str
    witnesses: Tuple[PellBound, ...] = ()
    scale: Fraction = Fraction(1)

    @property
    def is_submaximal(self) -> bool:
        return self.kind == SUBMAXIMAL

    def scaled(self, s) -> "SeshadriResult":
        """Result for ``s * L_t`` (homogeneity)."""
        s = as_rat(s)
        if isinstance(self.value, SqrtRat):
            value = SqrtRat(self.value.radicand * s * s)
        else:
            value = self.value * s
        return SeshadriResult(self.t, value, self.kind, self.witnesses, self.scale * s)

    def __float__(self):
        return float(self.value)


class CurveOption(NamedTuple):
    cls: BundleClass
    multiplicity: int


@dataclass(frozen=True)
class CurveCertificate:
    lam: Fraction
    pell: PellSolution
    bound: PellBound
    curve_class_options: Tuple[CurveOption, CurveOption]


@dataclass(frozen=True)
class Segment:
    """A maximal piece of the computed envelope; ``bound is None`` marks a gap
    where no certified bound at the working resolution is submaximal."""

    lo: Surd
    hi: Surd
    bound: Optional[PellBound]
    certified: bool

    @property
    def is_gap(self) -> bool:
        return self.bound is None


# ---------------------------------------------------------------------------
# ellipse search


class _Form:
    """Integer coefficients of (M.L_lam)^2 - v^2 M^2 <= v^2 for M = b L0 + a Linf."""

    def __init__(self, lam: Fraction, v: Fraction, order: OrderSpec):
        g00, g01, g11 = order.form()
        self.u0 = g00 + g01 * lam
        self.u1 = g01 + g11 * lam
        v2 = v * v
        A = self.u0 * self.u0 - v2 * g00
        B = self.u0 * self.u1 - v2 * g01
        C = self.u1 * self.u1 - v2 * g11
        den = 1
        for x in (A, B, C, v2):
            den = den * x.denominator // gcd(den, x.denominator)
        self.A, self.B, self.C = int(A * den), int(B * den), int(C * den)
        self.V = int(v2 * den)
        det = self.A * self.C - self.B * self.B
        if self.A <= 0 or det <= 0:
            raise ValueError("value is not below sqrt(L^2); search region unbounded")
        self.bmax = isqrt(self.V * self.C // det)
        self._det = det

    def value(self, b: int, a: int) -> int:
        return self.A * b * b + 2 * self.B * a * b + self.C * a * a

    def a_range(self, b: int) -> range:
        disc = self.V * self.C - self._det * b * b
        if disc < 0:
            return range(0)
        s = isqrt(disc)
        lo = (-self.B * b - s - 1) // self.C
        hi = (-self.B * b + s + 1) // self.C + 1
        return range(lo, hi + 1)


def _class_data(b: int, a: int, order: OrderSpec) -> Optional[int]:
    """D = M^2 for M = b L0 + a Linf if M is ample, else None."""
    e = order.e
    if order.is_half:
        if 4 * b * b + 4 * a * b + (1 - e) * a * a <= 0:
            return None
        return 2 * b * b + 2 * a * b + ((1 - e) // 2) * a * a
    if b * b - e * a * a <= 0:
        return None
    return 2 * b * b - 2 * e * a * a


def _search(
    lam: Fraction,
    order: OrderSpec,
    v: Fraction,
    *,
    exclude: Optional[Fraction] = None,
    qcap: Optional[int] = None,
    first_only: bool = False,
) -> Tuple[Optional[Fraction], List[PellBound]]:
    """Pell bounds pi_mu with pi_mu(lam) <= v, keeping only the minimum.

    ``v`` shrinks as better bounds appear.  Returns the minimal value found and
    all bounds attaining it (empty list when none reaches ``v``).  With
    ``first_only`` the search stops at the first bound with value <= v.
    """
    form = _Form(lam, v, order)
    best: Optional[Fraction] = None
    winners: List[PellBound] = []
    b = 1
    while True:
        limit = form.bmax if qcap is None else min(form.bmax, qcap)
        if b > limit:
            break
        for a in form.a_range(b):
            G = form.value(b, a)
            if G > form.V or G <= 0:
                continue
            if gcd(a, b) != 1:
                continue
            mu = Fraction(a, b)
            if exclude is not None and mu == exclude:
                continue
            D = _class_data(b, a, order)
            if D is None or is_square(D):
                continue
            kmax = isqrt(form.V // G)
            if kmax < 1:
                continue
            sol = pell1_bounded(D, kmax)
            if sol is None:
                continue
            val = sol.y * (b * form.u0 + a * form.u1) / sol.x
            if val > v:
                continue
            bound = make_bound(mu, order, sol)
            if first_only:
                return val, [bound]
            if best is None or val < best:
                best, winners = val, [bound]
                if val < v:
                    v = val
                    form = _Form(lam, v, order)
            elif val == best:
                winners.append(bound)
        b += 1
    return best, winners


def _norm_pairs(D: int, n: int, xmax: int) -> List[Tuple[int, int]]:
    """Solutions (Z, X) of Z^2 - D X^2 = -n with Z > 0 and 0 < X <= xmax."""
    if xmax <= _DIRECT_X:
        out = []
        for X in range(1, xmax + 1):
            r = D * X * X - n
            if r > 0:
                Z = isqrt(r)
                if Z * Z == r:
                    out.append((Z, X))
        return out
    return norm_solutions(D, -n, xmax)


# below this many X values, trying each one beats solving the norm equation
_DIRECT_X = 64


def _norm_search(
    lam: Fraction,
    order: OrderSpec,
    v: Fraction,
    *,
    exclude: Optional[Fraction] = None,
    first_only: bool = False,
) -> Tuple[Optional[Fraction], List[PellBound]]:
    """Same contract as :func:`_search`, without the ellipse walk.

    Write N = q L_lam, D = N^2 and let M be a primitive class with Pell
    solution (x, y) and cross product d with N.  Then Z = y (M.N) and X = x
    satisfy Z^2 - D X^2 = -(D - c y^2 d^2), where c = 4e or e is minus the
    Gram determinant.  A bound below sqrt(L_lam^2) forces the right side to be
    negative, and pi_M(lam) <= v bounds X, so the classes come from finitely
    many norm equations.  The cost no longer depends on the size of the Pell
    solution at lam.
    """
    q, p = lam.denominator, lam.numerator
    g00, g01, g11 = order.form()
    D = square_class_D(lam, order)
    c = order.e if order.is_half else 4 * order.e
    u = int(g00 * q + g01 * p)
    w = int(g01 * q + g11 * p)
    qv = q * v
    gap = D - qv * qv
    if gap <= 0:
        raise ValueError("value is not below sqrt(L^2)")
    best: Optional[Fraction] = None
    winners: List[PellBound] = []
    seen = set()
    m = 1
    while c * m * m < D:
        n = D - c * m * m
        if n < gap:
            # X >= 1 forces n >= gap, and n only shrinks with m
            break
        xmax = isqrt(int(n / gap))
        for Z, X in _norm_pairs(D, n, xmax):
            for kk in range(1, m + 1):
                if m % kk or Z % kk or (X * X - 1) % (kk * kk):
                    continue
                Y = Z // kk
                for d in (m // kk, -(m // kk)):
                    bn, an = d * w + q * Y, p * Y - u * d
                    if bn % D or an % D:
                        continue
                    b, a = bn // D, an // D
                    if b <= 0 or gcd(a, b) != 1:
                        continue
                    mu = Fraction(a, b)
                    if mu in seen or (exclude is not None and mu == exclude):
                        continue
                    Dm = _class_data(b, a, order)
                    if Dm is None or is_square(Dm):
                        continue
                    seen.add(mu)
                    sol = pell1_bounded(Dm, kk)
                    val = Fraction(sol.y * Y, q * sol.x)
                    if val > v:
                        continue
                    bound = make_bound(mu, order, sol)
                    if first_only:
                        return val, [bound]
                    if best is None or val < best:
                        best, winners = val, [bound]
                    elif val == best:
                        winners.append(bound)
        m += 1
    return best, winners


# ---------------------------------------------------------------------------
# public operations


SEED_Q = 8


def _seeds(t: Fraction, order: OrderSpec) -> List[PellBound]:
    """Pell bounds with small denominator near t (t itself excluded).

    They give a cheap starting value for the searches; a smaller value
    shrinks the range the norm search has to cover.
    """
    return [pell_bound(lam, order) for lam in _lambdas_near(t, t, SEED_Q, order) if lam != t]


def _check_ample(t: Fraction, order: OrderSpec):
    if not is_ample_ray(t, order):
        raise NotAmpleError(f"L_t with t={t} is not ample for {order}")


def epsilon_irrational(t, order: OrderSpec) -> SeshadriResult:
    """Seshadri constant of L_t when sqrt(L_t^2) is irrational.

    Minimum of the Pell bounds pi_mu(t) over the finite candidate set; all
    minimisers are returned as witnesses.
    """
    t = as_rat(t)
    own = pell_bound(t, order)
    v_own = own(t)
    v = min([v_own] + [bd(t) for bd in _seeds(t, order)])
    best, winners = _norm_search(t, order, v, exclude=t)
    if best is None or best > v_own:
        value, wit = v_own, [own]
    elif best < v_own:
        value, wit = best, winners
    else:
        value, wit = v_own, [own] + winners
    wit.sort(key=lambda bd: (bd.q, bd.lam))
    return SeshadriResult(t, value, SUBMAXIMAL, tuple(wit))


def certify_curve(t, order: OrderSpec) -> Optional[CurveCertificate]:
    """Certificate that pi_t is the linear function of a submaximal curve.

    This holds exactly when pi_t(t) is strictly below every other Pell bound at t.
    """
    t = as_rat(t)
    own = pell_bound(t, order)
    v = own(t)
    if any(bd(t) <= v for bd in _seeds(t, order)):
        return None
    best, _ = _norm_search(t, order, v, exclude=t, first_only=True)
    if best is not None:
        return None
    return _certificate(own)


def _certificate(bound: PellBound) -> CurveCertificate:
    q, p = bound.q, bound.lam.numerator
    k, l = bound.k, bound.l
    opts = (
        CurveOption(BundleClass(Fraction(k * q), Fraction(k * p)), l),
        CurveOption(BundleClass(Fraction(2 * k * q), Fraction(2 * k * p)), 2 * l),
    )
    return CurveCertificate(bound.lam, bound.pell, bound, opts)


def _flank_slopes(t: Fraction, order: OrderSpec) -> Tuple[Fraction, Fraction]:
    """Slopes m1 >= m2 of Seshadri curves at rational points left and right of t."""
    q = t.denominator
    slopes = []
    for side in (-1, 1):
        # by concavity any point on this side gives a valid slope bound; one
        # with a small denominator keeps the norm equations small
        ends = sorted((t, t + Fraction(side, q * q)))
        near = sorted(farey_between(ends[0], ends[1], 2 * q), key=lambda x: x.denominator)
        far = (t + Fraction(side, N * q * q) for N in itertools.count(1))
        for mu in itertools.chain(near, far):
            if is_ample_ray(mu, order) and not has_rational_root(mu, order):
                res = epsilon_irrational(mu, order)
                cs = [w.c1 for w in res.witnesses]
                slopes.append(min(cs) if side < 0 else max(cs))
                break
    return slopes[0], slopes[1]


def _inner_point(t: Fraction, cap: Fraction, slope: Fraction, side: int, order: OrderSpec) -> Fraction:
    """A rational point on the given side of t where cap + slope*(x - t) < sqrt(L_x^2).

    Bisects towards the crossing; the result is verified exactly, so the span
    between the two inner points is a certified lower bound for |I|.
    """
    lo_n, hi_n = nef_interval(order)
    edge = float(hi_n) if side > 0 else float(lo_n)
    inside = t
    outside = Fraction(edge).limit_denominator(10**6)

    def below(x):
        return is_ample_ray(x, order) and cmp_rat_sqrt(cap + slope * (x - t), SqrtRat(ray_square(x, order))) < 0

    if below(outside):
        return outside
    for _ in range(60):
        mid = (inside + outside) / 2
        mid = mid.limit_denominator(10**12) if mid.denominator > 10**12 else mid
        if mid == inside or mid == outside:
            break
        if below(mid):
            inside = mid
        else:
            outside = mid
    return inside


def epsilon(t, order: OrderSpec) -> SeshadriResult:
    """Seshadri constant of L_t for any rational t in the ample range."""
    t = as_rat(t)
    _check_ample(t, order)
    if not has_rational_root(t, order):
        return epsilon_irrational(t, order)
    q = t.denominator
    r = isqrt(square_class_D(t, order))
    F2 = ray_square(t, order)
    # any submaximal Seshadri curve of the primitive class q L_t gives at most this
    cap = Fraction(2 * r * r - 1, 2 * q * r)
    m1, m2 = _flank_slopes(t, order)
    left = _inner_point(t, cap, m2, -1, order)
    right = _inner_point(t, cap, m1, 1, order)
    Q = qbound_from_length(right - left, order)
    best, winners = _search(t, order, cap, qcap=Q)
    if best is not None and cmp_rat_sqrt(best, SqrtRat(F2)) < 0:
        winners.sort(key=lambda bd: (bd.q, bd.lam))
        return SeshadriResult(t, best, SUBMAXIMAL, tuple(winners))
    return SeshadriResult(t, SqrtRat(F2), MAXBOUND, ())


def epsilon_class(L, order: OrderSpec) -> SeshadriResult:
    L = L if isinstance(L, BundleClass) else BundleClass.of(*L)
    if not is_ample(L, order):
        raise NotAmpleError(f"class ({L}) is not ample for {order}")
    scale, t = normalize(L)
    return epsilon(t, order).scaled(scale)


def _window(order: OrderSpec) -> Fraction:
    """Rational upper bound for sqrt(11/e), the widest possible J times q."""
    return Fraction(isqrt(11 * 10**12 // order.e) + 1, 10**6)


def _lambdas_near(lo, hi, qmax: int, order: OrderSpec, reach: bool = True):
    """Rationals p/q (q <= qmax) whose Pell interval could meet [lo, hi]."""
    w = _window(order)
    out = []
    for q in range(1, qmax + 1):
        pad = w / q if reach else 0
        a0 = int(((lo - pad) * q).__floor__())
        a1 = int(((hi + pad) * q).__ceil__())
        for p in range(a0, a1 + 1):
            if gcd(p, q) != 1:
                continue
            lam = Fraction(p, q)
            if not reach and not (lo <= lam <= hi):
                continue
            if is_ample_ray(lam, order) and not has_rational_root(lam, order):
                out.append(lam)
    out.sort(key=lambda x: (x.denominator, x))
    return out


def _certify_one(args):
    lam, order = args
    return certify_curve(lam, order)


def _map(fn, items, workers: int):
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (8 * workers))))
    return [fn(x) for x in items]


def certified_bounds(lambdas: Sequence[Fraction], order: OrderSpec, workers: int = 1) -> List[PellBound]:
    certs = _map(_certify_one, [(lam, order) for lam in lambdas], workers)
    return [c.bound for c in certs if c is not None]


def submax_curves_at(t, order: OrderSpec, qmax: int, workers: int = 1) -> List[CurveCertificate]:
    """Certified curves with denominator <= qmax that are submaximal at t."""
    t = as_rat(t)
    _check_ample(t, order)
    out = []
    for lam in _lambdas_near(t, t, qmax, order):
        bd = pell_bound(lam, order)
        if not bd.interval.contains(t):
            continue
        cert = certify_curve(lam, order)
        if cert is not None:
            out.append(cert)
    out.sort(key=lambda c: c.lam)
    return out


# ---------------------------------------------------------------------------
# lower envelope


def _surd_key():
    return functools.cmp_to_key(lambda x, y: surd_sign(x - y))


def lower_envelope(bounds: Sequence[PellBound], order: OrderSpec) -> List[Segment]:
    """Pieces of t -> min{pi(t) : t in J_pi} and the uncovered gaps between them.

    Segments carry exact endpoints: interval ends are surds, crossing points of
    two lines are rational.
    """
    e = order.e
    if not bounds:
        return []
    pts = set()
    for bd in bounds:
        pts.add(bd.interval.lo)
        pts.add(bd.interval.hi)
    for i, bi in enumerate(bounds):
        for bj in bounds[i + 1:]:
            ov = bi.interval.intersect(bj.interval)
            if ov is None or bi.c1 == bj.c1:
                continue
            x = Surd.rational((bj.c0 - bi.c0) / (bi.c1 - bj.c1), e)
            if ov.contains(x):
                pts.add(x)
    pts = sorted(pts, key=_surd_key())
    pieces: List[Tuple[Surd, Surd, Optional[PellBound]]] = []
    for x0, x1 in zip(pts, pts[1:]):
        mid = (x0 + x1) / 2
        best = None
        for bd in bounds:
            if bd.interval.contains(mid):
                if best is None or surd_sign(bd(mid) - best(mid)) < 0:
                    best = bd
        if pieces and pieces[-1][2] is best:
            pieces[-1] = (pieces[-1][0], x1, best)
        else:
            pieces.append((x0, x1, best))
    return [Segment(a, b, bd, bd is not None) for a, b, bd in pieces]


def bounds_near(lo, hi, qmax: int, order: OrderSpec, workers: int = 1) -> List[PellBound]:
    """Certified bounds with denominator <= qmax whose interval meets [lo, hi]."""
    lo, hi = as_rat(lo), as_rat(hi)
    if qmax < 1:
        raise InvalidRangeError("qmax must be >= 1")
    if not (lo < hi) or not is_ample_ray(lo, order) or not is_ample_ray(hi, order):
        raise InvalidRangeError(f"[{lo}, {hi}] is not an interval inside the open nef interval")
    e = order.e
    rng = SubmaxInterval(Surd.rational(lo, e), Surd.rational(hi, e))
    lambdas = [lam for lam in _lambdas_near(lo, hi, qmax, order) if pell_bound(lam, order).interval.meets(rng)]
    return certified_bounds(lambdas, order, workers)


def sample_function(lo, hi, qmax: int, order: OrderSpec, workers: int = 1) -> List[Segment]:
    """Segment structure of the Seshadri function on [lo, hi] at resolution qmax.

    Every rational p/q with q <= qmax whose Pell interval can meet the range is
    certified; the lower envelope of the certified bounds is returned.  Pieces
    reaching past the range keep their true endpoints; gaps are clipped to it.
    """
    bounds = bounds_near(lo, hi, qmax, order, workers)
    return clip_segments(lower_envelope(bounds, order), lo, hi, order)


def clip_segments(segments: Sequence[Segment], lo, hi, order: OrderSpec) -> List[Segment]:
    """Keep pieces meeting [lo, hi]; fill uncovered stretches with gaps."""
    e = order.e
    L, H = Surd.rational(lo, e), Surd.rational(hi, e)
    out: List[Segment] = []
    cursor = L
    for seg in segments:
        if seg.is_gap:
            continue
        if surd_sign(seg.hi - L) <= 0 or surd_sign(seg.lo - H) >= 0:
            continue
        if surd_sign(seg.lo - cursor) > 0:
            out.append(Segment(cursor, seg.lo, None, False))
        out.append(seg)
        if surd_sign(seg.hi - cursor) > 0:
            cursor = seg.hi
    if surd_sign(H - cursor) > 0:
        out.append(Segment(cursor, H, None, False))
    return out
