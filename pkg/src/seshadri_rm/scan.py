"""Line bundles with two submaximal curves.

Two Pell bounds whose submaximality intervals overlap without nesting, and
whose union is not covered by the interval of a third Pell bound, produce a
line bundle with two submaximal curves.  For ``Z[sqrt(e)]``, and for
``Z[1/2 + 1/2 sqrt(e)]`` when ``e`` has a prime factor 5 or 7 mod 8, there is
always at most one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from bisect import bisect_left, bisect_right
from math import frexp, gcd, isqrt
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from sympy import factorint
from sympy.ntheory import is_quad_residue

from .bounds import PellBound, SubmaxInterval, pell_bound, qbound_from_length, square_class_D
from .exactfield import as_rat, is_square, surd_sign
from .exceptions import BadInputError, InvariantViolation, SquareEError
from .lattice import OrderSpec
from .pell import pell1_bounded
from .seshadri import _class_data, _map, certify_curve
from .symmetry import fundamental_interval


@dataclass(frozen=True)
class TwoCurveWitness:
    lambda1: Fraction
    lambda2: Fraction
    bounds: Tuple[PellBound, PellBound]
    overlap: SubmaxInterval
    covering_check_qbound: int

    @property
    def union(self) -> SubmaxInterval:
        J1, J2 = self.bounds[0].interval, self.bounds[1].interval
        lo = J1.lo if surd_sign(J1.lo - J2.lo) <= 0 else J2.lo
        hi = J1.hi if surd_sign(J1.hi - J2.hi) >= 0 else J2.hi
        return SubmaxInterval(lo, hi)


class ResidueClassification(NamedTuple):
    no_bad_prime: bool
    minus2_qr: bool
    repr_A_8B: Optional[Tuple[int, int]]


class ScanRecord(NamedTuple):
    e: int
    witness: Optional[TwoCurveWitness]
    qmax: int


def _has_bad_prime(e: int) -> bool:
    return any(p % 8 in (5, 7) for p in factorint(e))


def guaranteed_single(order: OrderSpec) -> bool:
    """True when every ample class has at most one submaximal curve."""
    return not order.is_half or _has_bad_prime(order.e)


def classify_e(e: int) -> ResidueClassification:
    e = int(e)
    if e % 4 != 1 or isqrt(e) ** 2 == e:
        raise BadInputError(f"e={e} must be a non-square integer = 1 (mod 4)")
    rep = None
    B = 1
    while 8 * B * B < e:
        r = e - 8 * B * B
        A = isqrt(r)
        if A * A == r and gcd(A, B) == 1:
            rep = (A, B)
            break
        B += 1
    return ResidueClassification(not _has_bad_prime(e), bool(is_quad_residue(-2 % e, e)), rep)


def eligible(e: int) -> bool:
    """e = 1 (mod 4), e >= 5, non-square, no prime factor 5 or 7 mod 8."""
    return e >= 5 and e % 4 == 1 and isqrt(e) ** 2 != e and not _has_bad_prime(e)


# ---------------------------------------------------------------------------
# covering check


def _disc_factor(order: OrderSpec) -> int:
    # (M.N)^2 - M^2 N^2 = c * cross(M, N)^2
    return order.e if order.is_half else 4 * order.e


def find_cover(b1: PellBound, b2: PellBound, order: OrderSpec) -> Optional[PellBound]:
    """A Pell bound whose interval contains J1 u J2, or None.

    If J_tau contains a point lam, then c * k_tau^2 * cross(tau, lam)^2 < D_lam
    (c as in :func:`_disc_factor`).  Containing both base points bounds both
    cross products, which pins tau to finitely many lattice points; the search
    is complete for every denominator.
    """
    c = _disc_factor(order)
    (q1, p1), (q2, p2) = (b1.q, b1.lam.numerator), (b2.q, b2.lam.numerator)
    D1, D2 = b1.D, b2.D
    det = p1 * q2 - p2 * q1
    if det == 0:
        raise InvariantViolation("bounds share a base point")
    U = TwoCurveWitness(b1.lam, b2.lam, (b1, b2), b1.interval, 0).union
    r1, r2 = isqrt((D1 - 1) // c), isqrt((D2 - 1) // c)
    best = None
    for d1 in range(-r1, r1 + 1):
        if d1 == 0:
            continue
        for d2 in range(-r2, r2 + 1):
            if d2 == 0:
                continue
            # b p1 - a q1 = d1,  b p2 - a q2 = d2
            bn, an = d1 * q2 - d2 * q1, p2 * d1 - p1 * d2
            if bn % det or an % det:
                continue
            b, a = bn // det, an // det
            if b <= 0 or gcd(a, b) != 1:
                continue
            D = _class_data(b, a, order)
            if D is None or isqrt(D) ** 2 == D:
                continue
            kmax = min(isqrt((D1 - 1) // (c * d1 * d1)), isqrt((D2 - 1) // (c * d2 * d2)))
            sol = pell1_bounded(D, kmax)
            if sol is None:
                continue
            k = sol.y
            if c * k * k * d1 * d1 >= D1 or c * k * k * d2 * d2 >= D2:
                continue
            tau = pell_bound(Fraction(a, b), order)
            if tau.interval.covers(U):
                if best is None or (tau.q, tau.lam) < (best.q, best.lam):
                    best = tau
    return best


def _overlap_ok(b1: PellBound, b2: PellBound) -> Optional[SubmaxInterval]:
    J1, J2 = b1.interval, b2.interval
    ov = J1.intersect(J2)
    if ov is None or J1.covers(J2) or J2.covers(J1):
        return None
    return ov


def verify_witness(b1: PellBound, b2: PellBound, order: OrderSpec) -> Optional[TwoCurveWitness]:
    """Check both conditions of the two-curve criterion for a pair of bounds."""
    ov = _overlap_ok(b1, b2)
    if ov is None or find_cover(b1, b2, order) is not None:
        return None
    w = TwoCurveWitness(b1.lam, b2.lam, (b1, b2), ov, 0)
    Q = qbound_from_length(w.union.length(), order)
    return TwoCurveWitness(b1.lam, b2.lam, (b1, b2), ov, Q)


# ---------------------------------------------------------------------------
# searches


def _lambdas_in(lo: Fraction, hi: Fraction, qmax: int, order: OrderSpec) -> List[Fraction]:
    out = []
    for q in range(1, qmax + 1):
        for p in range(-(-lo * q // 1), int(hi * q // 1) + 1):
            if gcd(p, q) != 1:
                continue
            lam = Fraction(p, q)
            D = square_class_D(lam, order)
            if D > 0 and not is_square(D):
                out.append(lam)
    return out


class _IntervalIndex:
    """Float intervals bucketed by binary length scale; each bucket is sorted
    by left end, so overlap queries only touch nearby entries."""

    def __init__(self):
        self._buckets: Dict[int, Tuple[List[float], list]] = {}

    STEP = 4  # binary orders of magnitude per bucket

    def add(self, lo: float, hi: float, item) -> None:
        # tiny intervals can collapse to zero width in floats
        exp = frexp(hi - lo)[1] if hi > lo else -1074
        scale = -(-exp // self.STEP) * self.STEP
        los, items = self._buckets.setdefault(scale, ([], []))
        i = bisect_right(los, lo)
        los.insert(i, lo)
        items.insert(i, (lo, hi, item))

    def meeting(self, lo: float, hi: float, slack: float = 1e-9) -> list:
        out = []
        for scale, (los, items) in self._buckets.items():
            i = bisect_left(los, lo - 2.0 ** scale - slack)
            j = bisect_right(los, hi + slack)
            for k in range(i, j):
                if items[k][1] >= lo - slack:
                    out.append(items[k][2])
        return out


def has_two_submax_witness(order: OrderSpec, qmax: int, at=None) -> Optional[TwoCurveWitness]:
    """First witness among certified bounds with base point in the
    fundamental interval and denominator <= qmax.

    Bounds are visited by ascending denominator, then ascending base point;
    each new bound is paired with the earlier ones in the same order.  With
    ``at`` given, only pairs whose overlap contains that point are considered.
    """
    if qmax < 1:
        raise BadInputError("qmax must be >= 1")
    if at is not None:
        at = as_rat(at)
    fi = fundamental_interval(order)
    seen = _IntervalIndex()
    certified: Dict[Fraction, bool] = {}

    def is_certified(lam):
        if lam not in certified:
            certified[lam] = certify_curve(lam, order) is not None
        return certified[lam]

    visit = 0
    for lam in _lambdas_in(fi.lo, fi.hi, qmax, order):
        bd = pell_bound(lam, order)
        J = bd.interval
        if at is not None and not J.contains(at):
            continue
        lo, hi = float(J.lo), float(J.hi)
        partners = [b for _, b in sorted(seen.meeting(lo, hi), key=lambda x: x[0])]
        visit += 1
        if not partners:
            # certification is the expensive step, so it waits until some
            # interval overlaps
            seen.add(lo, hi, (visit, bd))
            continue
        # a bound at or below pi_lam(lam) has lam in its interval, so it is
        # often among the partners already
        v = bd(lam)
        if any(other(lam) <= v for other in partners):
            certified[lam] = False
        if not is_certified(lam):
            continue
        for other in partners:
            if not is_certified(other.lam):
                continue
            w = verify_witness(other, bd, order)
            if w is not None:
                return w
        seen.add(lo, hi, (visit, bd))
    return None


def _scan_one(args) -> ScanRecord:
    e, qmax, qmax_cap = args
    order = OrderSpec.half(e)
    while True:
        w = has_two_submax_witness(order, qmax)
        if w is not None or qmax >= qmax_cap:
            return ScanRecord(e, w, qmax)
        qmax = min(2 * qmax, qmax_cap)


def _scan_jobs(case2_e_max, qmax, e_min, qmax_cap):
    if qmax < 1:
        raise BadInputError("qmax must be >= 1")
    cap = qmax if qmax_cap is None else max(qmax, qmax_cap)
    return [(e, qmax, cap) for e in range(max(e_min, 5), case2_e_max + 1) if eligible(e)]


def scan_range(case2_e_max: int, qmax: int, workers: int = 1, e_min: int = 5,
               qmax_cap: Optional[int] = None) -> List[ScanRecord]:
    """Witness search for every eligible e in [e_min, case2_e_max], sorted by e.

    Each e starts at resolution ``qmax``; when nothing is found the resolution
    doubles until ``qmax_cap``.  A record's ``qmax`` is the last resolution
    tried.
    """
    jobs = _scan_jobs(case2_e_max, qmax, e_min, qmax_cap)
    return sorted(_map(_scan_one, jobs, workers), key=lambda r: r.e)


def iter_scan(case2_e_max: int, qmax: int, workers: int = 1, e_min: int = 5,
              qmax_cap: Optional[int] = None) -> Iterator[ScanRecord]:
    """Like :func:`scan_range` but yields records in order of e as they finish."""
    jobs = _scan_jobs(case2_e_max, qmax, e_min, qmax_cap)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield from ex.map(_scan_one, jobs)
    else:
        for job in jobs:
            yield _scan_one(job)


def check_en(n: int, qmax: int) -> TwoCurveWitness:
    """Witness for e = 1 + 8 n^2 built from the bounds at 1/(2n) and 1/(2n-1)."""
    n = int(n)
    if n < 1:
        raise BadInputError("n must be >= 1")
    e = 1 + 8 * n * n
    if isqrt(e) ** 2 == e:
        raise SquareEError(f"e = 1 + 8*{n}^2 = {e} is a square")
    if qmax < 2 * n:
        raise BadInputError(f"qmax={qmax} is below the denominator 2n={2 * n} of the witness bounds")
    order = OrderSpec.half(e)
    b1 = pell_bound(Fraction(1, 2 * n), order)
    b2 = pell_bound(Fraction(1, 2 * n - 1), order)
    if (b1.l, b1.k) != (2 * n + 1, 1) or (b2.l, b2.k) != (2 * n - 1, 1):
        raise InvariantViolation(f"unexpected Pell solutions {tuple(b1.pell)}, {tuple(b2.pell)}")
    t = Fraction(2, 4 * n - 1)
    if not (b1.is_submaximal_at(t) and b2.is_submaximal_at(t)):
        raise InvariantViolation(f"bounds are not both submaximal at {t}")
    w = verify_witness(b1, b2, order)
    if w is None:
        raise InvariantViolation(f"no witness for n={n}")
    return w
