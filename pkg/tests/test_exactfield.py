from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from seshadri_rm.exactfield import (
    SqrtRat,
    Surd,
    cmp_rat_sqrt,
    cmp_surd_sqrt,
    parse_rat,
    rat_sqrt,
    rat_str,
    surd_max,
    surd_min,
    surd_sign,
)
from seshadri_rm.exceptions import MixedContextError

E_VALUES = [2, 3, 5, 33, 97]
rats = st.fractions(min_value=-1000, max_value=1000, max_denominator=500)


def surds(e):
    return st.builds(Surd, rats, rats, st.just(e))


def high_precision(x: Surd) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 80
        return (Decimal(x.a.numerator) / x.a.denominator
                + Decimal(x.b.numerator) / x.b.denominator * Decimal(x.e).sqrt())


@pytest.mark.parametrize("text,value", [
    ("3", Fraction(3)), ("-2/7", Fraction(-2, 7)), (" 4/6 ", Fraction(2, 3)), ("0", Fraction(0)),
])
def test_parse_rat(text, value):
    assert parse_rat(text) == value


@pytest.mark.parametrize("text", ["0.37", "1e3", "abc", "", "1/0"])
def test_parse_rat_rejects_inexact(text):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rat(text)


def test_rat_str_round_trip():
    for x in [Fraction(0), Fraction(-5, 3), Fraction(7)]:
        assert parse_rat(rat_str(x)) == x


def test_rat_sqrt():
    assert rat_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    with pytest.raises(ValueError):
        rat_sqrt(Fraction(2))


def test_sqrt_rat():
    assert SqrtRat(4).is_rational() and SqrtRat(4).exact() == 2
    assert not SqrtRat(82).is_rational()
    assert SqrtRat(Fraction(1, 4)).to_json() == {"sqrt": "1/4"}
    with pytest.raises(ValueError):
        SqrtRat(-1)


def test_cmp_rat_sqrt():
    assert cmp_rat_sqrt(Fraction(232, 3), SqrtRat(6724)) < 0
    assert cmp_rat_sqrt(2, SqrtRat(4)) == 0
    assert cmp_rat_sqrt(-1, SqrtRat(0)) < 0
    assert cmp_rat_sqrt(Fraction(3, 2), SqrtRat(2)) > 0


@pytest.mark.parametrize("e", E_VALUES)
@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_field_axioms(e, data):
    x, y, z = (data.draw(surds(e)) for _ in range(3))
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y
    assert x.norm() == (x * x.conjugate()).a
    assert (x * x.conjugate()).b == 0


@pytest.mark.parametrize("e", E_VALUES)
@given(data=st.data())
@settings(max_examples=80, deadline=None)
def test_sign_matches_high_precision(e, data):
    x = data.draw(surds(e))
    d = high_precision(x)
    expected = 0 if x.a == 0 and x.b == 0 else (1 if d > 0 else -1)
    assert surd_sign(x) == expected
    assert x.floor() == int(d.to_integral_value(rounding="ROUND_FLOOR"))


def test_sign_near_zero():
    # 99 - 70 sqrt(2) ~ 0.00505, and its conjugate is large
    assert surd_sign(Surd(99, -70, 2)) == 1
    assert surd_sign(Surd(-99, 70, 2)) == -1
    # 577^2 - 2 * 408^2 = 1
    assert surd_sign(Surd(577, -408, 2)) == 1


def test_order_and_min_max():
    a, b = Surd(1, 1, 5), Surd(3, 0, 5)
    assert a > b and b < a and a >= a and b <= a
    assert surd_min(a, b) == b and surd_max(a, b) == a


def test_rational_equality_and_hash():
    assert Surd(Fraction(1, 2), 0, 2) == Fraction(1, 2)
    assert hash(Surd(1, 1, 2)) == hash(Surd(Fraction(2, 2), 1, 2))


def test_power():
    x = Surd(1, 1, 2)
    assert x ** 3 == x * x * x
    assert x ** 0 == 1


def test_mixed_context_rejected():
    with pytest.raises(MixedContextError):
        Surd(1, 1, 2) + Surd(1, 1, 3)


def test_json_round_trip():
    x = Surd(Fraction(-3, 7), Fraction(5, 2), 33)
    assert Surd.from_json(x.to_json()) == x
    assert x.to_json() == {"a": "-3/7", "b": "5/2", "e": 33}


def test_cmp_surd_sqrt():
    # (1 + sqrt 2)^2 = 3 + 2 sqrt 2 < 6
    assert cmp_surd_sqrt(Surd(1, 1, 2), SqrtRat(6)) < 0
    assert cmp_surd_sqrt(Surd(1, 1, 2), SqrtRat(5)) > 0
