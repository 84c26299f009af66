"""Applications of the qd table: regular C-fractions, poles, polynomial zeros."""

import json
from dataclasses import dataclass, field, asdict

from gmpy2 import mpq

from . import oracle, progressive, qdtable
from .errors import QDError


# -- continued fractions -----------------------------------------------------

@dataclass
class CFraction:
    """a_0 + a_1 z / (1 + a_2 z / (1 + a_3 z / (1 + ...)))"""
    coeffs: list
    K: int                 # number of complete (q_k, e_k) pairs used
    truncated: bool = False

    def __len__(self):
        return len(self.coeffs)

    def floats(self):
        return [oracle.round_nearest(a) if isinstance(a, oracle.BigReal)
                else float(a) for a in self.coeffs]


def shifted_series(series):
    """The series c_1, c_2, ... whose qd table feeds the C-fraction."""
    if isinstance(series, qdtable.SeriesInput):
        ex = series.exact[1:] if series.exact is not None else None
        return qdtable.SeriesInput(series.hi[1:], series.lo[1:], ex)
    return list(series)[1:]


def cfrac(table, c0, c1):
    """Regular C-fraction coefficients from the first row of a qd table.

    ``table`` must be built from the shifted coefficients c_1, c_2, ...
    (see shifted_series).  Then a_{2k} = -q_k^(0), a_{2k+1} = -e_k^(0).
    Works for binary64 tables and for oracle tables (exact coefficients).
    A masked first-row cell truncates the fraction.
    """
    coeffs = [c0, c1]
    exact = isinstance(table, oracle.ExactQdTable)
    truncated = False
    K = 0
    k = 1
    while True:
        if exact:
            qv = table.q[k][0] if k < len(table.q) and table.q[k] else None
        else:
            qv = table.value("q", k, 0) if table.has("q", k, 0) else None
        if qv is None:
            truncated = k < len(table.q)
            break
        coeffs.append(-qv)
        if exact:
            ev = table.e[k][0] if k < len(table.e) and table.e[k] else None
        else:
            ev = table.value("e", k, 0) if table.has("e", k, 0) else None
        if ev is None:
            truncated = k < len(table.e)
            break
        coeffs.append(-ev)
        K = k
        k += 1
    return CFraction(coeffs, K, truncated)


def cfrac_from_series(series, algorithm="compqd", init="real"):
    """Build the shifted table with the chosen engine and read off a_i."""
    if algorithm == "exact":
        vals = [oracle.to_mpq(v) for v in series]
        t = oracle.exact_qd(vals[1:])
        return cfrac(t, vals[0], vals[1])
    s = qdtable._series(series)
    t = qdtable.build(shifted_series(s), algorithm, init)
    return cfrac(t, s.hi[0], s.hi[1])


def _series_inv(t, order):
    """1 / t as a power series through z^order (t[0] != 0)."""
    out = [mpq(0)] * (order + 1)
    inv0 = 1 / t[0]
    for n in range(order + 1):
        acc = mpq(1) if n == 0 else mpq(0)
        for i in range(1, min(n, len(t) - 1) + 1):
            acc -= t[i] * out[n - i]
        out[n] = acc * inv0
    return out


def cfrac_expand(cf, order):
    """Power series of the truncated C-fraction through z^order, exactly."""
    a = [oracle.to_mpq(x) for x in cf.coeffs]
    if order < 0:
        raise ValueError("order must be non-negative")
    if len(a) == 1:
        return [a[0]] + [mpq(0)] * order
    # tail = 1 + a_k z / tail_{k+1}, innermost tail is 1
    tail = [mpq(1)] + [mpq(0)] * order
    for k in range(len(a) - 1, 1, -1):
        inv = _series_inv(tail, order)
        tail = [mpq(1)] + [a[k] * inv[i - 1] for i in range(1, order + 1)]
    inv = _series_inv(tail, order)
    out = [a[0]] + [a[1] * inv[i - 1] for i in range(1, order + 1)]
    return out


def correspondence_order(cf):
    """Number of series terms a fraction with these coefficients reproduces."""
    return len(cf.coeffs) - 1


# -- poles -------------------------------------------------------------------

@dataclass
class Pole:
    value: float
    m: int
    n: int
    converged: bool
    method: str


@dataclass
class PoleReport:
    method: str
    poles: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {"method": self.method,
                "poles": [asdict(p) for p in self.poles],
                "diagnostics": self.diagnostics}

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)


def poles_direct(table, which=None, conv_tol=1e-6):
    """pole_m = 1 / q_m^(n*) at the deepest valid n* of each column.

    The estimate is flagged converged when the neighbouring e_m (the deepest
    valid one with index <= n*) satisfies |e| <= conv_tol |q|.
    """
    rep = PoleReport("direct", diagnostics={"conv_tol": conv_tol})
    cols = range(1, table.mq + 1) if which is None else which
    for m in cols:
        if not 1 <= m <= table.mq:
            continue
        nstar = None
        for n in range(len(table.q[m]) - 1, -1, -1):
            if table.valid("q", m, n) and table.value("q", m, n) != 0:
                nstar = n
                break
        if nstar is None:
            continue
        qv = table.value("q", m, nstar)
        conv = False
        if m <= table.me:
            for n in range(min(nstar, len(table.e[m]) - 1), -1, -1):
                if table.valid("e", m, n):
                    conv = abs(table.value("e", m, n)) <= conv_tol * abs(qv)
                    break
        rep.poles.append(Pole(1.0 / qv, m, nstar, conv, "direct"))
    return rep


def _critical_recurrence(get, m, j, n, one):
    # prev[i] is p_k^(n+i) in ascending powers
    prev = {i: [one] for i in range(j + 1)}
    for k in range(j):
        cur = {}
        for i in range(j - k):
            qv = get(m + k + 1, n + i)
            if qv is None:
                return None
            hi = prev[i + 1]
            lo = prev[i]
            out = [one - one] * (len(hi) + 1)
            for d, v in enumerate(hi):
                out[d + 1] = out[d + 1] + v
            for d, v in enumerate(lo):
                out[d] = out[d] - qv * v
            cur[i] = out
        prev = cur
    return list(reversed(prev[0]))


def critical_poly(table, m, j, n):
    """Coefficients (leading first) of p_j^(n) in binary64.

    p_0 = 1, p_{k+1}^(n)(z) = z p_k^(n+1)(z) - q_{m+k+1}^(n) p_k^(n)(z).
    Returns None if a needed cell is missing or masked.
    """
    def get(col, k):
        if not table.valid("q", col, k):
            return None
        return table.value("q", col, k)
    return _critical_recurrence(get, m, j, n, 1.0)


def critical_poly_exact(table, m, j, n):
    """Rational p_j^(n) from an oracle table (None where a cell is undefined)."""
    def get(col, k):
        if col >= len(table.q) or not 0 <= k < len(table.q[col]):
            return None
        return table.q[col][k]
    return _critical_recurrence(get, m, j, n, mpq(1))


def poles_critical_exact(table, m=1, j=3, n=None):
    """Reference poles m+1..m+j from an oracle table, sorted by modulus.

    The zeros of the rational p_j^(n) are isolated exactly; only real
    zeros are returned.
    """
    if n is None:
        n = table.degree - 2 * (m + j) - 1
    coeffs = critical_poly_exact(table, m, j, n)
    if coeffs is None:
        raise QDError("undefined cell in p_j")
    zs = oracle.reference_zeros(coeffs, real_only=True)
    return sorted((1 / z for z in zs if z != 0), key=abs)


def _newton(coeffs, x, steps=5):
    for _ in range(steps):
        p = 0.0
        dp = 0.0
        for c in coeffs:
            dp = dp * x + p
            p = p * x + c
        if dp == 0:
            break
        step = p / dp
        nx = x - step
        if nx == x:
            break
        x = nx
    return x


def _critical_zeros(coeffs):
    z = oracle.reference_zeros(coeffs, precision_bits=64, real_only=True)
    return [_newton(coeffs, oracle.round_nearest(v)) for v in z]


def poles_critical(table, m=1, j=3, n=None, conv_tol=1e-6):
    """Poles m+1..m+j from the zeros of p_j^(n) (critical index method).

    n defaults to N - 2(m+j) - 1.  The estimate is flagged converged when the
    zeros of p_j^(n-1) agree with those of p_j^(n) to conv_tol (relative).
    """
    N = table.degree
    if n is None:
        n = N - 2 * (m + j) - 1
    if n < 0 or m + j > table.mq or not table.has("q", m + j, n):
        raise QDError("need larger degree")
    rep = PoleReport("critical", diagnostics={"m": m, "j": j, "n": n,
                                              "conv_tol": conv_tol})
    coeffs = critical_poly(table, m, j, n)
    if coeffs is None:
        rep.diagnostics["error"] = "masked cell in p_j"
        return rep
    rep.diagnostics["poly"] = coeffs
    zs = _critical_zeros(coeffs)
    poles = sorted((1.0 / z for z in zs if z != 0), key=abs)
    ref = None
    if n >= 1:
        pc = critical_poly(table, m, j, n - 1)
        if pc is not None:
            zp = _critical_zeros(pc)
            if len(zp) == len(zs):
                ref = sorted((1.0 / z for z in zp if z != 0), key=abs)
    if len(zs) < j:
        rep.diagnostics["non_real"] = j - len(zs)
    for i, p in enumerate(poles):
        conv = (ref is not None and len(ref) == len(poles)
                and len(zs) == j
                and abs(p - ref[i]) <= conv_tol * abs(p))
        rep.poles.append(Pole(p, m + 1 + i, n, conv, "critical"))
    return rep


# -- polynomial zeros --------------------------------------------------------

@dataclass
class ZeroReport:
    variant: str
    zeros: list
    converged: bool
    sweeps: int
    max_e: float
    natural_order: list
    rel_errors: list = None
    status: str = "converged"

    def to_dict(self):
        return asdict(self)

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)


def zeros(poly, variant="compproqd", tol=1e-16, max_sweeps=None,
          reference=None, backend=None):
    """All zeros of a polynomial with the progressive qd scheme.

    ``reference`` may be a list of exact zeros (ascending) to attach
    relative errors.
    """
    run = progressive.comp_proqd if variant == "compproqd" else progressive.proqd
    if variant not in ("proqd", "compproqd"):
        raise ValueError("variant must be 'proqd' or 'compproqd'")
    res = run(poly, tol, max_sweeps, backend=backend)
    rep = ZeroReport(variant, res.zeros, res.converged, res.sweeps,
                     res.max_e, res.natural_order, status=res.status)
    if reference is not None:
        rep.rel_errors = [oracle.rel_error(z, r)
                          for z, r in zip(res.zeros, reference)]
    return rep
