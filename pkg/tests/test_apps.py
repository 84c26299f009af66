import json

import pytest
from hypothesis import given, settings, strategies as st
from gmpy2 import mpq

from compqd import apps, oracle, qdtable
from compqd.errors import QDError
from compqd.qdtable import SeriesInput

from conftest import FUNTAY, FUNTAY2, exp_series


def test_exp_cfrac_closed_form():
    # e^z: a_{2k} = -1/(2(2k-1)), a_{2k+1} = 1/(2(2k+1))
    cf = apps.cfrac_from_series(exp_series(20), "exact")
    a = cf.coeffs
    assert a[0] == 1 and a[1] == 1
    for k in range(1, 10):
        assert a[2 * k] == mpq(-1, 2 * (2 * k - 1))
        assert a[2 * k + 1] == mpq(1, 2 * (2 * k + 1))
    assert len(a) == 21 and not cf.truncated


@pytest.mark.parametrize("series", [
    exp_series(16),
    oracle.gen_taylor_exp_rational(FUNTAY, 21),
    [mpq(2 ** n + 3 ** n, n + 1) for n in range(12)],
])
def test_expand_reproduces_series(series):
    cf = apps.cfrac_from_series(series, "exact")
    order = apps.correspondence_order(cf)
    assert apps.cfrac_expand(cf, order) == list(series[:order + 1])


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7)
                .filter(lambda v: v != 0), min_size=3, max_size=10))
def test_expand_property(vals):
    c = [mpq(v.numerator, v.denominator) for v in vals]
    cf = apps.cfrac_from_series(c, "exact")
    if cf.truncated:
        return
    order = apps.correspondence_order(cf)
    assert apps.cfrac_expand(cf, order) == c[:order + 1]


def test_compqd_cfrac_close_to_exact():
    c = [mpq(oracle.round_nearest(v)) for v in exp_series(30)]
    ref = apps.cfrac_from_series(c, "exact")
    cf = apps.cfrac_from_series(c, "compqd")
    assert max(oracle.rel_error(a, b) for a, b in zip(cf.coeffs, ref.coeffs)) \
        <= 1e-13


def test_cfrac_truncates_on_breakdown():
    cf = apps.cfrac_from_series([1] * 8, "qd")
    # shifted series is 1, 1, ...: only q_1 and e_1 survive
    assert cf.coeffs[:4] == [1.0, 1.0, -1.0, -0.0]
    assert cf.truncated and cf.K == 1


def test_cfrac_expand_trivial():
    cf = apps.CFraction([mpq(2)], 0)
    assert apps.cfrac_expand(cf, 3) == [2, 0, 0, 0]
    with pytest.raises(ValueError):
        apps.cfrac_expand(cf, -1)


def test_direct_geometric_pole():
    c = [mpq(2 ** n + 1) for n in range(31)]
    t = qdtable.build_compqd(SeriesInput.from_exact(c))
    rep = apps.poles_direct(t, [1])
    assert rep.poles[0].n == 29
    # at degree 30 the estimate is still 2^-31 away from the limit
    exact = mpq(2 ** 29 + 1, 2 ** 30 + 1)
    assert oracle.rel_error(rep.poles[0].value, exact) <= 2.0 ** -52
    c = [mpq(2 ** n + 1) for n in range(43)]
    t = qdtable.build_compqd(SeriesInput.from_exact(c))
    rep = apps.poles_direct(t, [1])
    assert abs(rep.poles[0].value - 0.5) <= 1e-12 and rep.poles[0].converged


def test_direct_on_oracle_table_is_monotone():
    c = oracle.gen_taylor_exp_rational(FUNTAY2, 30)
    ex = oracle.exact_qd(c)
    for m, z in ((1, 1), (2, 2)):
        col = ex.q[m]
        d = [abs(1 / v - z) for v in col[-6:]]
        assert all(a > b for a, b in zip(d, d[1:]))


def test_direct_skips_missing_columns():
    t = qdtable.build_qd([1] * 8)
    rep = apps.poles_direct(t)
    assert [p.m for p in rep.poles] == [1]
    assert apps.poles_direct(t, [9]).poles == []


def test_critical_poly_is_monic():
    t = qdtable.build_compqd(SeriesInput.from_exact(
        oracle.gen_taylor_exp_rational(FUNTAY2, 33)))
    for j in (1, 2, 3):
        p = apps.critical_poly(t, 1, j, 5)
        assert p[0] == 1.0 and len(p) == j + 1


def test_critical_cubic_matches_explicit_form():
    t = qdtable.build_compqd(SeriesInput.from_exact(
        oracle.gen_taylor_exp_rational(FUNTAY2, 33)))
    n = 24
    q = lambda m, k: t.value("q", m, k)
    p = apps.critical_poly(t, 1, 3, n)
    assert p[1] == -(q(2, n + 2) + q(3, n + 1)) - q(4, n)
    c1 = q(2, n + 1) * q(3, n + 1)
    c1 = c1 + q(2, n + 1) * q(4, n)
    c1 = c1 + q(3, n) * q(4, n)
    assert p[2] == pytest.approx(c1, rel=1e-15)
    assert p[3] == pytest.approx(-q(2, n) * q(3, n) * q(4, n), rel=1e-15)


def test_critical_j1_is_direct():
    t = qdtable.build_compqd(SeriesInput.from_exact(
        oracle.gen_taylor_exp_rational(FUNTAY2, 33)))
    n = 20
    rep = apps.poles_critical(t, m=1, j=1, n=n)
    assert rep.poles[0].value == pytest.approx(1 / t.value("q", 2, n),
                                               rel=1e-15)


def test_critical_needs_columns():
    t = qdtable.build_compqd(exp_series(7))
    with pytest.raises(QDError, match="need larger degree"):
        apps.poles_critical(t, m=1, j=3)


def test_critical_frozen_values():
    t = qdtable.build_compqd(SeriesInput.from_exact(
        oracle.gen_taylor_exp_rational(FUNTAY2, 33)))
    rep = apps.poles_critical(t)
    assert rep.diagnostics["n"] == 24
    vals = [p.value for p in rep.poles]
    assert vals == pytest.approx([2.0, 3.0, 4.0], rel=1e-5)
    assert vals[0] == pytest.approx(1.999999999984543, rel=1e-13)


def test_pole_report_json():
    t = qdtable.build_compqd(exp_series(9))
    rep = apps.poles_direct(t, [1])
    d = json.loads(rep.to_json())
    assert set(d) == {"method", "poles", "diagnostics"}
    assert set(d["poles"][0]) == {"value", "m", "n", "converged", "method"}


def test_zeros_report():
    rep = apps.zeros([1, -7, 14, -8], "compproqd", 1e-16, 500,
                     reference=[1, 2, 4])
    assert rep.zeros == pytest.approx([1.0, 2.0, 4.0], rel=2.0 ** -52)
    assert all(e <= 2.0 ** -52 for e in rep.rel_errors)
    assert json.loads(rep.to_json())["variant"] == "compproqd"
    with pytest.raises(ValueError):
        apps.zeros([1, -2], "nope")


def test_critical_exact_reference():
    # reference digits for degree 33 and 43
    c = oracle.gen_taylor_exp_rational(FUNTAY2, 33)
    got = [float(v) for v in apps.poles_critical_exact(oracle.exact_qd(c))]
    assert got == pytest.approx([1.999999999984540, 2.999999453378657,
                                 4.000001214856524], rel=1e-15)
    c = oracle.gen_taylor_exp_rational(FUNTAY2, 43)
    got = [float(v) for v in apps.poles_critical_exact(oracle.exact_qd(c))]
    assert got == pytest.approx([2.0, 2.999999999465995, 4.000000001186681],
                                rel=1e-15)
