import itertools
import random
from fractions import Fraction
from math import gcd

import pytest

from seshadri_rm.exceptions import NotAmpleError
from seshadri_rm.lattice import BundleClass, OrderSpec, is_ample, is_ample_ray, self_intersection
from seshadri_rm.seshadri import certify_curve, sample_function
from seshadri_rm.symmetry import (
    GEN,
    GEN_INV,
    INVOL,
    apply_isometry,
    extend_by_group,
    fundamental_interval,
    generators,
    principal_polarizations,
    reduce_to_fundamental,
    tile_matrices,
    word_matrix,
)

ORDERS = [OrderSpec.sqrt(2), OrderSpec.sqrt(3), OrderSpec.half(5), OrderSpec.half(33), OrderSpec.half(17)]


@pytest.mark.parametrize("order", ORDERS, ids=str)
def test_generators_are_cone_isometries(order):
    gen, invol = generators(order)
    for M in (gen, invol, gen.inverse()):
        assert M.preserves(order)
        assert M.det in (1, -1)
    assert apply_isometry(invol, (1, 0)) == (1, 0)
    assert (gen @ gen.inverse()).rows == ((1, 0), (0, 1))
    assert (invol @ invol).rows == ((1, 0), (0, 1))
    # the involution conjugates the generator to its inverse
    assert (invol @ gen @ invol).rows == gen.inverse().rows


@pytest.mark.parametrize("order,hi", [
    (OrderSpec.sqrt(2), Fraction(1, 2)),
    (OrderSpec.sqrt(3), Fraction(1, 3)),
    (OrderSpec.half(5), Fraction(1, 2)),
    (OrderSpec.half(33), Fraction(2, 5)),
], ids=str)
def test_fundamental_interval(order, hi):
    fi = fundamental_interval(order)
    assert (fi.lo, fi.hi) == (0, hi)
    assert fi.to_json() == {"lo": "0", "hi": str(hi)}


@pytest.mark.parametrize("order", ORDERS, ids=str)
def test_fundamental_interval_ends_are_fixed_points(order):
    """0 is fixed by the involution, hi by the involution composed with gen."""
    gen, invol = generators(order)
    fi = fundamental_interval(order)
    assert invol.move_ray(fi.lo) == fi.lo
    assert (gen @ invol).move_ray(fi.hi) == fi.hi


@pytest.mark.parametrize("order", ORDERS, ids=str)
def test_principal_polarizations(order):
    Ls = principal_polarizations(order, -3, 3)
    assert Ls[3] == BundleClass.of(1, 0)
    for L in Ls:
        assert self_intersection(L, order) == 2 and is_ample(L, order)
    slopes = [L.b / L.a for L in Ls]
    assert slopes == sorted(slopes)
    with pytest.raises(ValueError):
        principal_polarizations(order, 1, 0)


def random_classes(order, n, seed, bmax=12):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        a, b = rng.randint(1, 3 * bmax), rng.randint(-bmax, bmax)
        if gcd(a, b) == 1 and is_ample((a, b), order):
            out.append(BundleClass.of(a, b))
    return out


@pytest.mark.parametrize("order", ORDERS, ids=str)
def test_reduction(order):
    fi = fundamental_interval(order)
    for L in random_classes(order, 60, 1):
        t = L.b / L.a
        red = reduce_to_fundamental(t, order)
        assert red.t in fi
        M = word_matrix(red.word, order)
        image = apply_isometry(M, (1, red.t))
        # image = scale^-1 * L_t, so both lie on the same ray
        assert image.b / image.a == t
        assert image.a * red.scale == 1


def test_reduction_rejects_non_ample():
    with pytest.raises(NotAmpleError):
        reduce_to_fundamental(1, OrderSpec.sqrt(2))


def test_words():
    order = OrderSpec.half(33)
    gen, invol = generators(order)
    assert word_matrix((GEN, INVOL), order).rows == (invol @ gen).rows
    assert word_matrix((GEN, GEN_INV), order).rows == ((1, 0), (0, 1))


@pytest.mark.parametrize("order", ORDERS[:3], ids=str)
def test_tiles_cover_the_range(order):
    lo, hi = Fraction(-2, 3), Fraction(2, 3)
    while not (is_ample_ray(lo, order) and is_ample_ray(hi, order)):
        lo, hi = lo * Fraction(9, 10), hi * Fraction(9, 10)
    fi = fundamental_interval(order)
    tiles = tile_matrices(order, lo, hi)
    for k in range(41):
        t = lo + (hi - lo) * k / 40
        assert any(min(M.move_ray(fi.lo), M.move_ray(fi.hi)) <= t <= max(M.move_ray(fi.lo), M.move_ray(fi.hi))
                   for M in tiles)


@pytest.mark.parametrize("order,lo,hi", [
    (OrderSpec.sqrt(2), Fraction(-1, 2), Fraction(1, 2)),
    (OrderSpec.half(5), Fraction(-1, 4), Fraction(3, 4)),
], ids=["e2", "e5"])
def test_extend_by_group_matches_direct_sweep(order, lo, hi):
    # regression: at this resolution both routes find the same curves
    key = lambda s: (s.lo, s.hi, None if s.bound is None else s.bound.lam)
    direct = [key(s) for s in sample_function(lo, hi, 20, order)]
    moved = [key(s) for s in extend_by_group(lo, hi, 20, order)]
    assert direct == moved


@pytest.mark.parametrize("order,lo,hi", [
    (OrderSpec.sqrt(3), Fraction(-1, 2), Fraction(1, 2)),
    (OrderSpec.half(33), Fraction(-1, 5), Fraction(2, 5)),
], ids=["e3", "e33"])
def test_transported_bounds_are_certified(order, lo, hi):
    segs = extend_by_group(lo, hi, 20, order)
    lams = sorted({s.bound.lam for s in segs if not s.is_gap}, key=lambda x: (x.denominator, x))
    for lam in lams[:40]:
        assert certify_curve(lam, order) is not None


def all_words(max_len):
    letters = (GEN, GEN_INV, INVOL)
    for n in range(1, max_len + 1):
        yield from itertools.product(letters, repeat=n)


def test_all_short_words_preserve_the_cone():
    for order in ORDERS:
        for w in all_words(3):
            assert word_matrix(w, order).preserves(order)
