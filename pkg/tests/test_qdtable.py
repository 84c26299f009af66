import math

import pytest
from hypothesis import given, settings, strategies as st
from gmpy2 import mpq

from compqd import oracle, qdtable
from compqd.analysis import gamma_exact
from compqd.errors import BreakdownError, QDError
from compqd.qdtable import SeriesInput

from conftest import FUNTAY, bits_equal, exp_series

ALGS = ("qd", "compqd", "ddqd")


def funtay(N=35):
    return oracle.gen_taylor_exp_rational(FUNTAY, N)


def test_series_input_splitting():
    s = SeriesInput.from_exact([mpq(1, 3), mpq(2, 7), 5])
    for h, l, x in zip(s.hi, s.lo, s.exact):
        assert h == oracle.round_nearest(x)
        assert l == oracle.round_nearest(x - mpq(h))
        assert abs(l) <= abs(h) * 2.0 ** -53
    assert s.degree == 2 and not s.is_float()


@pytest.mark.parametrize("bad", [[0, 1, 2], [1.0], [1.0, float("inf")]])
def test_series_input_rejects(bad):
    with pytest.raises(ValueError):
        SeriesInput.from_floats(bad)


@pytest.mark.parametrize("alg", ALGS)
@pytest.mark.parametrize("N", [1, 2, 7, 12])
def test_triangular_shape(alg, N):
    t = qdtable.build(exp_series(N), alg)
    assert len(t.q) == (N + 1) // 2 + 1 and t.q[0] == []
    assert len(t.e) == N // 2 + 1 and t.e[0] == []
    for m in range(1, len(t.q)):
        assert len(t.q[m]) == N - 2 * m + 2
    for m in range(1, len(t.e)):
        assert len(t.e[m]) == N - 2 * m + 1


def test_init_q1_real_examples():
    ones = SeriesInput.from_exact([1] * 6)
    assert qdtable.init_q1_real(ones) == [(1.0, 0.0)] * 5
    geo = SeriesInput.from_exact([2 ** n + 1 for n in range(6)])
    assert qdtable.init_q1_real(geo)[0] == (1.5, 0.0)
    c = exp_series(35)
    s = SeriesInput.from_exact(c)
    g2 = gamma_exact(2)
    for n, (v, eps) in enumerate(qdtable.init_q1_real(s)):
        exact = c[n + 1] / c[n]
        assert abs(mpq(v) - mpq(eps) - exact) <= g2 * g2 * abs(exact)


def test_init_q1_float_examples():
    assert qdtable.init_q1_float([1.0, 1.0, 1.0]) == [(1.0, 0.0)] * 2
    assert qdtable.init_q1_float([3.0, 5.0])[0][0] == 5 / 3
    vals = [v for v in oracle.gen_random_poly(30, 2)]
    for n, (v, eps) in enumerate(qdtable.init_q1_float([float(x) for x in vals])):
        exact = vals[n + 1] / vals[n]
        assert abs(mpq(v) - mpq(eps) - exact) <= 2 * oracle.U ** 2 * abs(exact)


def test_q1_breakdown():
    with pytest.raises(BreakdownError, match="q1 breakdown at index 1"):
        qdtable.init_q1_float([1.0, 0.0, 2.0])
    s = SeriesInput([1.0, 0.0, 2.0], [0.0, 0.0, 0.0])
    with pytest.raises(BreakdownError, match="q1 breakdown at index 1"):
        qdtable.init_q1_real(s)


@pytest.mark.parametrize("alg", ALGS)
def test_single_pole_masks_second_column(alg):
    t = qdtable.build([1] * 8, alg)
    assert all(t.value("e", 1, n) == 0 for n in range(len(t.e[1])))
    assert not any(t.valid("q", 2, n) for n in range(len(t.q[2])))
    assert ("q", 2, 0, 1) in t.diagnostics
    if t.eps_q is not None:
        assert all(t.residual("q", 1, n) == 0 for n in range(len(t.q[1])))
    # every later cell is masked as a consequence
    assert all(math.isnan(v) for col in t.q[2:] for v in col)


def test_geometric_two_term():
    t = qdtable.build_qd([2 ** n + 1 for n in range(8)])
    assert t.value("q", 1, 0) == 1.5
    assert t.value("e", 1, 0) == 5 / 3 - 1.5
    ex = oracle.exact_qd([2 ** n + 1 for n in range(8)])
    assert ex.q[1][0] == mpq(3, 2) and ex.e[1][0] == mpq(1, 6)


def test_near_breakdown():
    # a tiny but nonzero pivot is masked with its own reason
    c = [1.0, 1.0, 1.0 + 2.0 ** -52, 1.0]
    t = qdtable.build_qd(c)
    assert any(d[3] in (1, 2) for d in t.diagnostics) or t.masked_count() == 0
    s = SeriesInput.from_floats([1.0, 2.0 ** -1000, 1.0])
    t = qdtable.build_qd(s)
    assert ("q", 1, 1, 2) in t.diagnostics
    assert qdtable.STATUS_NAMES[2] == "near-breakdown"


@pytest.mark.parametrize("alg", ALGS)
def test_mask_is_monotone(alg):
    vals = [1, 2, 0, 3, 1, 4, 1, 5, 9, 2]
    s = SeriesInput([float(v) for v in vals], [0.0] * len(vals))
    t = qdtable.build(s, alg)
    assert t.masked_count() > 0
    for kind, m, n in t.cells():
        if not t.valid(kind, m, n):
            continue
        if kind == "e":
            deps = [("q", m, n + 1), ("q", m, n)]
            if m > 1:
                deps.append(("e", m - 1, n + 1))
        elif m > 1:
            deps = [("e", m - 1, n + 1), ("e", m - 1, n), ("q", m - 1, n + 1)]
        else:
            deps = []
        assert all(t.valid(*d) for d in deps), (kind, m, n)


def test_funtay_compqd_accuracy_where_well_conditioned():
    from compqd.analysis import condition_table
    c = funtay()
    ex = oracle.exact_qd(c)
    conds = condition_table(ex)
    t = qdtable.build_compqd(SeriesInput.from_exact(c))
    worst = 0.0
    for m in range(1, ex.mq + 1):
        for n, x in enumerate(ex.q[m]):
            cq = conds.cond("q", m, n)
            if x is None or x == 0 or cq is None or cq >= 2 ** 53:
                continue
            worst = max(worst, oracle.rel_error(t.value("q", m, n), x))
    assert worst <= 1e-15


def test_funtay_ddqd_close_to_compqd():
    from compqd.analysis import condition_table
    c = funtay()
    ex = oracle.exact_qd(c)
    conds = condition_table(ex)
    s = SeriesInput.from_exact(c)
    cq = qdtable.build_compqd(s)
    dq = qdtable.build_ddqd(s)
    for kind, m, n, x in ex.cells():
        if x is None or x == 0:
            continue
        # beyond cond ~ 1/u^2 neither engine has a correct digit left
        if conds.cond(kind, m, n) * oracle.U ** 2 > 1e-2:
            continue
        a = oracle.rel_error(cq.value(kind, m, n), x)
        b = oracle.rel_error(dq.value(kind, m, n), x)
        assert b <= max(4 * a, 2.0 ** -50), (kind, m, n)


def test_funtay_q_columns_drift_to_reciprocal_poles():
    t = qdtable.build_compqd(SeriesInput.from_exact(funtay()))
    # poles 1, 2, -2, 3: columns 1 and 4 are separated by modulus
    assert abs(1 / t.value("q", 1, len(t.q[1]) - 1) - 1) < 1e-9
    assert abs(1 / t.value("q", 4, len(t.q[4]) - 1) - 3) < 1e-2


def test_compqd_frozen_cells():
    t = qdtable.build_compqd(SeriesInput.from_exact(funtay()))
    assert t.value("q", 2, 0).hex() == "0x1.08beceb5445f6p-1"
    assert t.residual("q", 2, 0).hex() == "-0x1.d6a88beceb53cp-55"
    assert t.value("e", 5, 3).hex() == "-0x1.245c264f40d54p-6"
    assert t.residual("e", 5, 3).hex() == "-0x1.29edde86c3708p-61"


def test_random_199_compqd():
    # binary64 coefficients: the refined pairs are accurate far below u
    vals = oracle.gen_random_poly(199, 7)
    s = SeriesInput.from_exact(vals)
    ex = oracle.exact_qd(vals)
    t = qdtable.build_compqd(s, "float")
    worst = 0.0
    for m in range(1, ex.mq + 1):
        for n, x in enumerate(ex.q[m]):
            if x is not None and x != 0 and t.valid("q", m, n):
                worst = max(worst, oracle.rel_error(t.value("q", m, n), x))
    assert worst <= 1e-15


@settings(max_examples=40)
@given(st.integers(min_value=4, max_value=24), st.integers(0, 10 ** 6))
def test_pairs_are_normalized(N, seed):
    vals = oracle.gen_random_poly(N, seed)
    t = qdtable.build_compqd(SeriesInput.from_exact(vals), "float")
    for kind, m, n in t.cells():
        if t.valid(kind, m, n):
            v, eps = t.value(kind, m, n), t.residual(kind, m, n)
            assert v - eps == v
            assert abs(eps) <= 2.0 ** -53 * abs(v)


@settings(max_examples=40)
@given(st.integers(min_value=2, max_value=16), st.integers(0, 10 ** 6))
def test_compqd_never_worse_than_qd_by_much(N, seed):
    vals = oracle.gen_random_poly(N, seed)
    ex = oracle.exact_qd(vals)
    s = SeriesInput.from_exact(vals)
    t = qdtable.build_compqd(s, "float")
    for kind, m, n, x in ex.cells():
        if x is None or x == 0 or not t.valid(kind, m, n):
            continue
        # the pair carries roughly twice the working precision
        assert oracle.rel_error(t.refined(kind, m, n), x) <= max(
            float(oracle.rel_error(t.value(kind, m, n), x)), 2.0 ** -52)


@pytest.mark.parametrize("alg", ALGS + ("exact",))
@pytest.mark.parametrize("hexfloat", [False, True])
def test_json_round_trip(alg, hexfloat):
    c = [1, 2, 0, 3, 1, 4, 1, 5, 9, 2]
    if alg == "exact":
        t = qdtable.from_exact_table(oracle.exact_qd(c))
    else:
        t = qdtable.build(SeriesInput.from_exact(c), alg)
    back = qdtable.QdTable.from_json(t.to_json(hexfloat=hexfloat))
    assert back.algorithm == t.algorithm and back.degree == t.degree
    assert bits_equal(back.q, t.q) and bits_equal(back.e, t.e)
    assert back.status_q == t.status_q and back.status_e == t.status_e
    if t.eps_q is not None:
        assert bits_equal(back.eps_q, t.eps_q)
        assert bits_equal(back.eps_e, t.eps_e)
    assert back.diagnostics == t.diagnostics


def test_json_layout():
    import json
    t = qdtable.build_qd([1] * 5)
    d = json.loads(t.to_json())
    assert list(d) == ["algorithm", "degree", "init", "float_format", "q",
                       "e", "eps_q", "eps_e", "mask", "diagnostics"]
    assert d["q"][1] == [None, None]
    assert d["mask"]["q"][1] == [True, True]
    assert d["diagnostics"][0] == {"kind": "q", "m": 2, "n": 0,
                                   "reason": "breakdown"}


def test_unknown_algorithm():
    with pytest.raises(QDError):
        qdtable.build([1, 2, 3], "nope")
    with pytest.raises(ValueError):
        qdtable.build_compqd([1, 2, 3], init="nope")
