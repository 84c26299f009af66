from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from compqd import dd, _pycore
from compqd.analysis import count_flops
from compqd.dd import DD
from compqd.errors import DDError

U = Fraction(1, 2 ** 53)

mag = st.floats(min_value=2.0 ** -400, max_value=2.0 ** 400)
sign = st.sampled_from([1.0, -1.0])
tail = st.floats(min_value=-1.0, max_value=1.0)


@st.composite
def dds(draw):
    hi = draw(mag) * draw(sign)
    lo = hi * draw(tail) * 2.0 ** -54
    x, y = _pycore.fast_two_sum(hi, lo)
    return DD(x, y)


def val(a):
    return Fraction(a.hi) + Fraction(a.lo)


def rel(approx, exact):
    return abs(val(approx) - exact) / abs(exact)


@given(dds(), dds())
def test_add_dd_dd_accuracy(a, b):
    exact = val(a) + val(b)
    assume(exact != 0)
    r = dd.dd_add_dd(a, b)
    assert dd.is_normalized(r)
    assert rel(r, exact) <= 4 * U * U


@given(dds(), mag)
def test_add_dd_d_accuracy(a, b):
    exact = val(a) + Fraction(b)
    assume(exact != 0)
    r = dd.dd_add_d(a, b)
    # the single-double variant is only accurate without heavy cancellation
    assume(abs(exact) >= abs(val(a)) / 2)
    assert rel(r, exact) <= 4 * U * U


@given(dds(), dds())
def test_mul_dd_dd_accuracy(a, b):
    r = dd.dd_mul_dd(a, b)
    assert rel(r, val(a) * val(b)) <= 4 * U * U


@given(dds(), mag)
def test_mul_dd_d_accuracy(a, b):
    r = dd.dd_mul_d(a, b)
    assert rel(r, val(a) * Fraction(b)) <= 4 * U * U


@given(dds(), dds())
def test_div_dd_dd_accuracy(a, b):
    r = dd.dd_div_dd(a, b)
    assert rel(r, val(a) / val(b)) <= 4 * U * U


@given(mag, mag)
def test_div_d_d_accuracy(a, b):
    r = dd.dd_div_d_d(a, b)
    assert rel(r, Fraction(a) / Fraction(b)) <= 4 * U * U


def test_examples():
    assert dd.dd_add_d(DD(1.0), 1.0) == DD(2.0, 0.0)
    assert dd.dd_add_d(DD(1.0, 2.0 ** -80), 0.0) == DD(1.0, 2.0 ** -80)
    assert dd.dd_add_dd(DD(1.0), DD(-1.0)) == DD(0.0, 0.0)
    assert dd.dd_add_dd(DD(1.0, 2.0 ** -60), DD(1.0, 2.0 ** -60)) == \
        DD(2.0, 2.0 ** -59)
    a = DD(0.1, 1e-18)
    assert dd.dd_mul_dd(a, DD(1.0)) == a
    assert dd.dd_mul_d(a, 1.0) == a
    assert dd.dd_mul_dd(a, DD(0.0)).hi == 0.0
    assert dd.dd_div_dd(DD(6.0), DD(3.0)) == DD(2.0, 0.0)
    assert dd.dd_div_dd(DD(1.0), DD(1.0)) == DD(1.0, 0.0)


def test_one_third():
    r = dd.dd_div_dd(DD(1.0), DD(3.0))
    assert r.hi == 1 / 3
    assert abs(val(r) - Fraction(1, 3)) < Fraction(1, 2 ** 105)


def test_plain_floats_are_promoted():
    assert dd.dd_add_dd(1.0, 2.0) == DD(3.0, 0.0)
    assert float(DD(1.0, 2.0 ** -60)) == 1.0


def test_errors():
    with pytest.raises(DDError, match="dd division by zero"):
        dd.dd_div_dd(DD(1.0), DD(0.0))
    with pytest.raises(DDError, match="dd division by zero"):
        dd.dd_div_d_d(1.0, 0.0)
    with pytest.raises(DDError, match="dd overflow"):
        dd.dd_mul_dd(DD(1e300), DD(1e300))


@pytest.mark.parametrize("fn,args,flops", [
    (_pycore.add_dd_d, (1.0, 1e-17, 0.3), 10),
    (_pycore.add_dd_dd, (1.0, 1e-17, 0.3, 1e-18), 20),
    (_pycore.prod_dd_d, (1.0, 1e-17, 0.3), 22),
    (_pycore.prod_dd_dd, (1.0, 1e-17, 0.3, 1e-18), 24),
    (_pycore.div_dd_dd, (1.0, 1e-17, 0.3, 1e-18), 100),
    (_pycore.div_d_d, (1.0, 0.3), 30),
])
def test_flop_counts(fn, args, flops):
    assert count_flops(fn, *args)[1] == flops


def test_backends_agree(core_name):
    a, b = DD(0.1, 1e-18), DD(-0.7, 3e-17)
    assert dd.dd_div_dd(a, b, backend=core_name) == dd.dd_div_dd(a, b)
