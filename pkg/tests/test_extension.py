import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful_sl2.errors import ZeroArgument
from wonderful_sl2.extension import ExtField, ExtKind, ext_arith, ext_valuation, norm
from wonderful_sl2.padic import make_field

F5 = make_field(5, 10)
UNRAM = ExtField(F5, ExtKind.UNRAMIFIED)
RAM = ExtField(F5, ExtKind.RAMIFIED_PI)


def test_conj():
    assert UNRAM(2, 3).conj() == UNRAM(2, -3)
    assert UNRAM(7, 0).conj() == UNRAM(7, 0)


def test_valuation_in_units_of_one_over_e():
    assert ext_valuation(RAM.alpha()) == 1
    assert ext_valuation(UNRAM.alpha()) == 0
    assert ext_valuation(RAM(5, 1)) == 1
    assert ext_valuation(RAM(5, 0)) == 2
    with pytest.raises(ZeroArgument):
        ext_valuation(RAM.zero())


def test_norm():
    assert norm(UNRAM.one()) == F5(1)
    assert norm(UNRAM.alpha()) == F5(-2)


def test_arith_oracles():
    prod = ext_arith("mul", UNRAM(1, 1), UNRAM(1, -1))
    assert prod == UNRAM(-1, 0)
    assert ext_arith("inv", RAM.alpha()) == RAM(0, 1) * RAM(F5(1, 5), 0)


kinds = st.sampled_from(list(ExtKind))
small = st.integers(-500, 500)


@settings(max_examples=150, deadline=None)
@given(kinds, small, small, small, small)
def test_norm_is_multiplicative(kind, a, b, c, d):
    E = ExtField(F5, kind)
    x, y = E(a, b), E(c, d)
    if x.is_zero or y.is_zero:
        return
    assert norm(x * y) == norm(x) * norm(y)
    assert (x * y).conj() == x.conj() * y.conj()


@settings(max_examples=150, deadline=None)
@given(kinds, small, small)
def test_inverse(kind, a, b):
    E = ExtField(F5, kind)
    x = E(a, b)
    if x.is_zero:
        return
    one = x * x.inverse()
    assert (one - E.one()).is_zero
    assert 2 * ext_valuation(x) == ext_valuation(E.embed(norm(x)))
