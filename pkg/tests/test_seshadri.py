import random
from fractions import Fraction
from math import gcd

import pytest

from seshadri_rm.bounds import has_rational_root, pell_bound
from seshadri_rm.exactfield import SqrtRat, Surd, cmp_rat_sqrt, surd_sign
from seshadri_rm.exceptions import InvalidRangeError, NotAmpleError
from seshadri_rm.lattice import OrderSpec, is_ample_ray, nef_interval, ray_square
from seshadri_rm.seshadri import (
    MAXBOUND,
    SUBMAXIMAL,
    _norm_search,
    _search,
    certify_curve,
    epsilon,
    epsilon_class,
    lower_envelope,
    sample_function,
    submax_curves_at,
)

from oracles import le_sqrt, min_over_lambdas

E2 = OrderSpec.sqrt(2)
E5 = OrderSpec.half(5)
E33 = OrderSpec.half(33)
ORDERS = [E2, OrderSpec.sqrt(3), E5, E33, OrderSpec.half(17)]


def sample_points(order, n, qmax, seed, rational_root=False):
    rng = random.Random(seed)
    lo, hi = (float(x) for x in nef_interval(order))
    out = []
    while len(out) < n:
        q = rng.randint(1, qmax)
        p = rng.randint(int(lo * q) - 1, int(hi * q) + 1)
        t = Fraction(p, q)
        if gcd(p, q) == 1 and is_ample_ray(t, order) and has_rational_root(t, order) == rational_root:
            out.append(t)
    return out


def test_origin_e2():
    res = epsilon(0, E2)
    assert res.value == Fraction(4, 3) and res.kind == SUBMAXIMAL
    assert [w.lam for w in res.witnesses] == [0]
    best = min_over_lambdas(0, "sqrt", 2, 9)
    assert best == (Fraction(4, 3), Fraction(0))


def test_certificate_at_origin():
    cert = certify_curve(0, E2)
    opts = [(tuple(o.cls), o.multiplicity) for o in cert.curve_class_options]
    assert opts == [((2, 0), 3), ((4, 0), 6)]
    assert cert.bound(0) == Fraction(4, 3)


def test_rational_root_maxbound():
    res = epsilon_class((2, 1), E2)
    assert res.kind == MAXBOUND
    assert res.value == SqrtRat(4)
    best = min_over_lambdas(Fraction(1, 2), "sqrt", 2, 40)
    assert not le_sqrt(best[0] * 2, Fraction(4) - Fraction(1, 10 ** 9))


def test_58_class():
    res = epsilon_class((58, 1), E2)
    assert res.value == Fraction(232, 3)
    assert cmp_rat_sqrt(res.value, SqrtRat(82 * 82)) < 0
    assert [w.lam for w in res.witnesses] == [0]


@pytest.mark.parametrize("t,value", [(Fraction(1, 3), Fraction(56, 45)), (Fraction(1, 5), Fraction(4, 3))])
def test_known_values_e2(t, value):
    assert epsilon(t, E2).value == value


@pytest.mark.parametrize("order", ORDERS, ids=str)
def test_epsilon_matches_exhaustive_minimum(order):
    for t in sample_points(order, 12, 15, 11):
        res = epsilon(t, order)
        assert res.kind == SUBMAXIMAL
        qw = max(w.q for w in res.witnesses)
        best = min_over_lambdas(t, order.ring.value, order.e, max(qw, 20))
        assert best[0] == res.value
        assert cmp_rat_sqrt(res.value, SqrtRat(ray_square(t, order))) < 0
        for w in res.witnesses:
            assert w(t) == res.value


RATIONAL_ROOT_POINTS = [
    (E2, [Fraction(1, 2), Fraction(-7, 10), Fraction(1, 10), Fraction(7, 26)]),
    (OrderSpec.sqrt(7), [Fraction(1, 3), Fraction(1, 5), Fraction(1, 13), Fraction(-7, 19)]),
]


def test_rational_root_points():
    for order, pts in RATIONAL_ROOT_POINTS:
        assert all(has_rational_root(t, order) for t in pts)


@pytest.mark.parametrize("order,points", RATIONAL_ROOT_POINTS, ids=["e2", "e7"])
def test_rational_branch_is_not_beaten(order, points):
    for t in points:
        res = epsilon(t, order)
        best = min_over_lambdas(t, order.ring.value, order.e, 30)
        F2 = ray_square(t, order)
        if res.kind == MAXBOUND:
            assert res.value == SqrtRat(F2)
            assert best is None or not (best[0] >= 0 and best[0] * best[0] < F2)
        else:
            assert best[0] >= res.value


@pytest.mark.parametrize("order", ORDERS, ids=str)
def test_norm_search_agrees_with_ellipse_search(order):
    # the ellipse walk grows with the Pell k at lam; keep k moderate
    points = [lam for lam in sample_points(order, 80, 30, 13) if pell_bound(lam, order).k <= 2000]
    assert len(points) >= 20
    for lam in points[:20]:
        v = pell_bound(lam, order)(lam)
        a = _search(lam, order, v, exclude=lam)
        b = _norm_search(lam, order, v, exclude=lam)
        assert a[0] == b[0]
        assert sorted(x.lam for x in a[1]) == sorted(x.lam for x in b[1])


def test_homogeneity():
    for L in [(3, 1), (5, 2), (7, -3)]:
        base = epsilon_class(L, E5)
        twice = epsilon_class((2 * L[0], 2 * L[1]), E5)
        if isinstance(base.value, SqrtRat):
            assert twice.value.radicand == 4 * base.value.radicand
        else:
            assert twice.value == 2 * base.value


def test_not_ample():
    with pytest.raises(NotAmpleError):
        epsilon(Fraction(1), E2)
    with pytest.raises(NotAmpleError):
        epsilon_class((1, 1), E2)


def test_submax_curves_at_e33():
    certs = submax_curves_at(Fraction(2, 7), E33, 30)
    assert [c.lam for c in certs] == [Fraction(1, 4), Fraction(1, 3)]


def test_submax_curves_at_e2_single():
    for t in sample_points(E2, 6, 20, 14):
        assert len(submax_curves_at(t, E2, 20)) <= 1


def simplest_inside(lo, hi):
    """Fraction with the smallest denominator strictly between two surds."""
    d = 1
    while True:
        x = Fraction((lo * d).floor() + 1, d)
        if surd_sign(hi - x) > 0:
            return x
        d += 1


def check_segments(segs, lo, hi, order):
    e = order.e
    assert segs and segs[0].lo <= Surd.rational(lo, e) and segs[-1].hi >= Surd.rational(hi, e)
    for s, nxt in zip(segs, segs[1:]):
        assert surd_sign(s.hi - s.lo) > 0
        assert s.hi == nxt.lo or (not s.is_gap and not nxt.is_gap and surd_sign(s.hi - nxt.lo) <= 0)
    for s in segs:
        assert s.is_gap == (s.bound is None) and s.certified == (not s.is_gap)


@pytest.mark.parametrize("order,lo,hi", [(E2, 0, Fraction(1, 2)), (E5, 0, Fraction(1, 3))], ids=["e2", "e5"])
def test_sample_function_matches_pointwise_values(order, lo, hi):
    segs = sample_function(lo, hi, 25, order)
    check_segments(segs, lo, hi, order)
    for s in segs:
        if s.is_gap:
            continue
        mid = simplest_inside(s.lo, s.hi)
        if not has_rational_root(mid, order):
            assert epsilon(mid, order).value == s.bound(mid)


def test_lower_envelope_of_two_lines():
    b1, b2 = pell_bound(Fraction(1, 4), E33), pell_bound(Fraction(1, 3), E33)
    segs = lower_envelope([b1, b2], E33)
    bounds = [s.bound.lam for s in segs if not s.is_gap]
    assert bounds[0] == Fraction(1, 4) and bounds[-1] == Fraction(1, 3)
    # the switch happens where the two lines cross
    cross = (b2.c0 - b1.c0) / (b1.c1 - b2.c1)
    assert any(s.hi == Surd.rational(cross, 33) for s in segs)


def test_invalid_ranges():
    with pytest.raises(InvalidRangeError):
        sample_function(Fraction(1, 2), Fraction(1, 3), 10, E2)
    with pytest.raises(InvalidRangeError):
        sample_function(0, 1, 10, E2)
    with pytest.raises(InvalidRangeError):
        sample_function(0, Fraction(1, 3), 0, E2)


def test_transported_rational_root_class():
    # (1130, 799) is the image of (10, 1) under the cube of the generator
    assert has_rational_root(Fraction(799, 1130), E2)
    assert epsilon_class((3390, 2397), E2).value == 3 * epsilon_class((10, 1), E2).value == 40
