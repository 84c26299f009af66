import pytest
from hypothesis import given, settings, strategies as st
from gmpy2 import mpq

from compqd import oracle
from compqd.errors import OracleError

from conftest import FUNTAY


def test_round_nearest_ties_to_even():
    # 1 + 2^-53 is halfway between 1 and its successor
    assert oracle.round_nearest(1 + mpq(1, 2 ** 53)) == 1.0
    assert oracle.round_nearest(1 + mpq(3, 2 ** 53)) == 1.0 + 2.0 ** -51
    assert oracle.round_nearest(mpq(1, 3)) == 1 / 3


def test_to_mpq_syntaxes():
    assert oracle.to_mpq("1/3") == mpq(1, 3)
    assert oracle.to_mpq("0.1") == mpq(1, 10)
    assert oracle.to_mpq("0x1.8p1") == 3
    assert oracle.to_mpq(0.5) == mpq(1, 2)


def test_real_to_dd():
    hi, lo, dropped = oracle.real_to_dd(mpq(1, 3))
    assert hi == 1 / 3
    assert mpq(hi) + mpq(lo) + dropped == mpq(1, 3)
    assert abs(dropped) < mpq(1, 2 ** 106)


def test_rel_error_zero_reference():
    assert oracle.rel_error(1e-20, 0, with_flag=True) == (1e-20, True)
    assert oracle.rel_error(1.0, 2) == 0.5


def test_laguerre_closed_form():
    # L_5 = (120 - 600x + 600x^2 - 200x^3 + 25x^4 - x^5) / 120
    expect = [mpq(v, 120) for v in (120, -600, 600, -200, 25, -1)]
    assert oracle.gen_laguerre(5) == expect


def test_taylor_generator():
    c = oracle.gen_taylor_exp_rational(FUNTAY, 3)
    assert [str(v) for v in c] == ["-1/12", "-7/36", "-127/432", "-469/1296"]
    with pytest.raises(OracleError, match="invalid factor"):
        oracle.gen_taylor_exp_rational([0, 1], 4)


def test_random_generator_is_deterministic():
    a = oracle.gen_random_poly(20, 5)
    assert a == oracle.gen_random_poly(20, 5)
    assert a != oracle.gen_random_poly(20, 6)
    assert all(-1 < v < 1 and v != 0 for v in a)
    assert all(mpq(float(v)) == v for v in a)


def test_exact_qd_geometric():
    # c_n = 2^n + 1 has poles at 1/2 and 1
    c = [mpq(2 ** n + 1) for n in range(8)]
    t = oracle.exact_qd(c)
    for n in range(7):
        assert t.q[1][n] == mpq(2 ** (n + 1) + 1, 2 ** n + 1)
    # two poles: e_2 vanishes identically
    assert all(v == 0 for v in t.e[2])


def test_exact_qd_breakdown_is_recorded():
    t = oracle.exact_qd([1, 0, 1, 2, 3])
    assert ("q", 1, 1, "breakdown") in t.diagnostics
    assert t.q[1][1] is None


def test_exact_qd_frozen_cells():
    # values rounded once from the exact table of the degree-35 series
    t = oracle.exact_qd(oracle.gen_taylor_exp_rational(FUNTAY, 35))
    r = oracle.round_nearest
    assert r(t.q[1][0]).hex() == "0x1.2aaaaaaaaaaabp+1"
    assert r(t.e[1][0]).hex() == "-0x1.a492492492492p-1"
    assert r(t.q[2][0]).hex() == "0x1.08beceb5445f6p-1"
    assert r(t.e[5][3]).hex() == "-0x1.245c264f40d54p-6"
    assert r(t.e[17][1]).hex() == "-0x1.cc85f811fac9fp-7"
    assert r(t.q[18][0]).hex() == "0x1.2a5fd15e012f8p-6"


small_series = st.lists(
    st.fractions(min_value=-50, max_value=50, max_denominator=20)
    .filter(lambda v: v != 0),
    min_size=3, max_size=9)


@settings(max_examples=60)
@given(small_series)
def test_rhombus_rules_match_hankel_ratios(vals):
    c = [mpq(v.numerator, v.denominator) for v in vals]
    t = oracle.exact_qd(c)
    for m in range(1, t.mq + 1):
        for n, v in enumerate(t.q[m]):
            if v is not None:
                assert v == oracle.hankel_q(c, m, n)
    for m in range(1, t.me + 1):
        for n, v in enumerate(t.e[m]):
            if v is not None:
                assert v == oracle.hankel_e(c, m, n)


@settings(max_examples=60)
@given(small_series)
def test_addition_rule_identity(vals):
    c = [mpq(v.numerator, v.denominator) for v in vals]
    t = oracle.exact_qd(c)
    for m in range(1, t.me + 1):
        for n, e in enumerate(t.e[m]):
            prev = t.e[m - 1][n + 1] if m > 1 else 0
            if e is None or prev is None:
                continue
            assert e + t.q[m][n] == t.q[m][n + 1] + prev


def test_hankel_small():
    c = [1, 2, 3, 5, 8]
    assert oracle.hankel(c, 0, 0) == 1
    assert oracle.hankel(c, 1, 2) == 3
    assert oracle.hankel(c, 2, 0) == 1 * 3 - 2 * 2
    assert oracle.hankel(c, 3, 0) == 0
    with pytest.raises(OracleError):
        oracle.hankel(c, 3, 1)


def test_bareiss_pivoting():
    assert oracle._bareiss([[0, 1], [1, 0]]) == -1
    assert oracle._bareiss([[0, 0], [1, 0]]) == 0
    assert oracle._bareiss([[2, 1, 0], [0, 0, 3], [1, 4, 1]]) == -21


def test_reference_zeros_cubic():
    z = oracle.reference_zeros([1, -7, 14, -8])
    assert [oracle.round_nearest(v) for v in z] == [1.0, 2.0, 4.0]
    for v, e in zip(z, (1, 2, 4)):
        assert abs(v - e) < mpq(1, 2 ** 190)


def test_reference_zeros_laguerre_frozen():
    z = oracle.reference_zeros(oracle.gen_laguerre(35)[::-1])
    assert len(z) == 35
    assert oracle.round_nearest(z[0]).hex() == "0x1.4da7579d2f276p-5"
    assert oracle.round_nearest(z[-1]).hex() == "0x1.ecb16947c8abdp+6"


def test_reference_zeros_refuses_complex():
    with pytest.raises(OracleError, match="non-real"):
        oracle.reference_zeros([1, 0, 1])
    assert oracle.reference_zeros([1, 0, 1], real_only=True) == []
    with pytest.raises(OracleError, match="repeated"):
        oracle.reference_zeros([1, -2, 1])
    z = oracle.reference_zeros([1, -1, 1, -1], real_only=True)
    assert [oracle.round_nearest(v) for v in z] == [1.0]


@settings(max_examples=40)
@given(small_series)
def test_hankel_sylvester_identity(vals):
    c = [mpq(v.numerator, v.denominator) for v in vals]
    for m in range(1, len(c) // 2):
        for n in range(1, len(c) - 2 * m):
            H = lambda i, k: oracle.hankel(c, i, k)  # noqa: E731
            assert H(m, n) ** 2 + H(m + 1, n - 1) * H(m - 1, n + 1) == \
                H(m, n - 1) * H(m, n + 1)
