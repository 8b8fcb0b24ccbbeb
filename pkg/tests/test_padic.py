from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful_sl2.errors import EvenPrime, NotPrime, PrecisionExhausted, PrecisionTooSmall, ZeroDenominator
from wonderful_sl2.padic import (
    SquareClass,
    agreement,
    arith,
    from_rational,
    make_field,
    square_class,
    sqrt,
)

F5 = make_field(5, 8)
F5_4 = make_field(5, 4)


# -- frozen oracles --------------------------------------------------------------


@pytest.mark.parametrize("p, S", [(5, 2), (3, 2), (7, 3), (13, 2)])
def test_nonsquare_unit(p, S):
    assert make_field(p, 8).S == S


def test_bad_fields():
    with pytest.raises(EvenPrime):
        make_field(2, 8)
    with pytest.raises(NotPrime):
        make_field(9, 8)
    with pytest.raises(PrecisionTooSmall):
        make_field(5, 2)


def test_from_rational():
    x = from_rational(50, 1, F5)
    assert x.valuation == 2 and x.digits[:2] == [2, 0]
    half = from_rational(1, 2, F5_4)
    assert half.valuation == 0 and half.digits[:3] == [3, 2, 2]
    assert from_rational(0, 7, F5).is_exact_zero
    with pytest.raises(ZeroDenominator):
        from_rational(1, 0, F5)


def test_arith_oracles():
    five = arith("add", F5(2), F5(3))
    assert five.valuation == 1 and five.digits[:2] == [1, 0]
    inv5 = arith("inv", F5(5))
    assert inv5.valuation == -1 and inv5.digits[:2] == [1, 0]
    x = arith("sub", F5(6), F5(1))
    assert x.valuation == 1 and x.digits[:2] == [1, 0] and x.prec == F5.N - 1


def test_cancellation_keeps_precision_honest():
    x = F5(1) + F5(5**8)  # 1 + p^N rounds to 1
    d = x - F5(1)
    assert d.is_zero and not d.is_exact_zero
    with pytest.raises(PrecisionExhausted):
        d.inverse()


@pytest.mark.parametrize("value, cls", [(1, SquareClass.ONE), (5, SquareClass.PI), (2, SquareClass.U), (10, SquareClass.UPI), (4, SquareClass.ONE)])
def test_square_class_oracles(value, cls):
    assert square_class(F5(value)) is cls


def test_sqrt_oracles():
    assert sqrt(F5(4)) == F5(2)
    assert sqrt(F5(2)) is None
    r = sqrt(F5_4(6))
    assert r.digits[:3] == [1, 3, 0]  # 16 mod 125


def test_klein_table():
    one, u, pi, upi = SquareClass.ONE, SquareClass.U, SquareClass.PI, SquareClass.UPI
    assert u * u is one and pi * pi is one and upi * upi is one
    assert u * pi is upi and upi * u is pi
    for c in SquareClass:
        assert c * one is c


# -- properties ------------------------------------------------------------------

primes = st.sampled_from([3, 5, 7, 13])
nonzero = st.integers(-10**6, 10**6).filter(lambda n: n != 0)


@settings(max_examples=200, deadline=None)
@given(primes, nonzero, st.integers(1, 10**4), nonzero, st.integers(1, 10**4))
def test_field_ops_match_rationals(p, a, b, c, d):
    F = make_field(p, 12)
    x, y = Fraction(a, b), Fraction(c, d)
    if x.denominator % p == 0 or y.denominator % p == 0:
        return
    X, Y = F(x), F(y)
    for got, want in ((X + Y, x + y), (X * Y, x * y), (X / Y, x / y), (X - Y, x - y)):
        if want == 0:
            assert got.is_zero
        else:
            assert agreement(got, F(want)) >= got.prec


@settings(max_examples=200, deadline=None)
@given(primes, nonzero, nonzero)
def test_square_class_is_a_homomorphism(p, a, b):
    F = make_field(p, 12)
    assert square_class(F(a) * F(b)) is square_class(F(a)) * square_class(F(b))


@settings(max_examples=200, deadline=None)
@given(primes, nonzero)
def test_sqrt_of_square(p, a):
    F = make_field(p, 12)
    x = F(a)
    r = sqrt(x * x)
    assert r is not None
    assert r == x or r == -x
    assert r.digits[0] <= (p - 1) // 2 or r.digits[0] == 0


@settings(max_examples=100, deadline=None)
@given(primes, nonzero)
def test_sqrt_absent_off_class_one(p, a):
    F = make_field(p, 12)
    x = F(a)
    assert (sqrt(x) is None) == (square_class(x) is not SquareClass.ONE)
