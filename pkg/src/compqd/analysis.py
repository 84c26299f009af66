"""Error analysis of qd tables.

Condition numbers, empirical stability factors, forward error bounds for
the classical and compensated builders, and flop-count models.

Condition numbers are evaluated in 256-bit binary floating point with
directed rounding (numerators rounded up, denominators down), so every
reported value is an upper bound of the exact rational one.  Exact
rationals would be rigorous too but their size grows quickly along the
table.
"""

import csv
import io
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpfr, mpq

from . import oracle
from . import _pycore

U = mpq(1, 2 ** 53)
PREC = 256
GATE = mpq(1, 1000)


def _up():
    return gmpy2.context(gmpy2.get_context(), precision=PREC,
                         round=gmpy2.RoundUp)


def _down():
    return gmpy2.context(gmpy2.get_context(), precision=PREC,
                         round=gmpy2.RoundDown)


def gamma_exact(n):
    """gamma_n = n u / (1 - n u) as an exact rational."""
    if n < 0:
        raise ValueError("n must be non-negative")
    nu = n * U
    if nu >= 1:
        raise ValueError("gamma_n needs n*u < 1")
    return nu / (1 - nu)


def gamma(n):
    """gamma_n rounded upward to binary64."""
    g = gamma_exact(n)
    f = oracle.round_nearest(g)
    if mpq(f) < g:
        import math
        f = math.nextafter(f, float("inf"))
    return f


# -- condition numbers -------------------------------------------------------

@dataclass
class ConditionTable:
    degree: int
    bar_q: list
    bar_e: list
    cond_q: list
    cond_e: list

    def cond(self, kind, m, n):
        t = self.cond_q if kind == "q" else self.cond_e
        if m < 1 or m >= len(t) or not 0 <= n < len(t[m]):
            return None
        return t[m][n]

    def max_cond_q(self):
        vals = [v for col in self.cond_q[1:] for v in col if v is not None]
        return max(vals) if vals else None


def condition_table(exact):
    """Condition numbers cond_e, cond_q for every cell of an exact table.

    Cells whose exact value is zero or that depend on an undefined cell get
    None (reported as "exact-zero" / undefined).
    """
    N = exact.degree
    mq, me = (N + 1) // 2, N // 2
    bar_q = [[]] + [[None] * len(exact.q[m]) for m in range(1, mq + 1)]
    bar_e = [[]] + [[None] * len(exact.e[m]) for m in range(1, me + 1)]
    cond_q = [[]] + [[None] * len(exact.q[m]) for m in range(1, mq + 1)]
    cond_e = [[]] + [[None] * len(exact.e[m]) for m in range(1, me + 1)]

    with _down():
        lo_q = [[]] + [[mpfr(abs(v)) if v is not None else None
                        for v in exact.q[m]] for m in range(1, mq + 1)]
        lo_e = [[]] + [[mpfr(abs(v)) if v is not None else None
                        for v in exact.e[m]] for m in range(1, me + 1)]
    with _up():
        hi_q = [[]] + [[mpfr(abs(v)) if v is not None else None
                        for v in exact.q[m]] for m in range(1, mq + 1)]
        for n, v in enumerate(hi_q[1]):
            if v is not None:
                bar_q[1][n] = v
        zero = mpfr(0)
        for m in range(1, me + 1):
            for n in range(len(exact.e[m])):
                a, b = bar_q[m][n + 1], bar_q[m][n]
                c = bar_e[m - 1][n + 1] if m > 1 else zero
                if a is None or b is None or c is None:
                    continue
                bar_e[m][n] = a + b + c
            if m + 1 > mq:
                continue
            for n in range(len(exact.q[m + 1])):
                be1, be0, bq = bar_e[m][n + 1], bar_e[m][n], bar_q[m][n + 1]
                d1, d0, dq = lo_e[m][n + 1], lo_e[m][n], lo_q[m][n + 1]
                v = hi_q[m + 1][n]
                if None in (be1, be0, bq, v) or not (d1 and d0 and dq):
                    continue
                bar_q[m + 1][n] = (be1 / d1 + bq / dq + be0 / d0) * v
        for m in range(1, mq + 1):
            for n, b in enumerate(bar_q[m]):
                d = lo_q[m][n]
                if b is not None and d:
                    cond_q[m][n] = b / d
        for m in range(1, me + 1):
            for n, b in enumerate(bar_e[m]):
                d = lo_e[m][n]
                if b is not None and d:
                    cond_e[m][n] = b / d
    return ConditionTable(N, bar_q, bar_e, cond_q, cond_e)


# -- stability factors -------------------------------------------------------

@dataclass
class StabilityFactors:
    b: list       # b[m][n] (qd side, from the hat values)
    B: list       # B[0..M]
    Phi: list     # Phi[0..M], Phi_m = prod_{i<=m} B_i
    d: list = None
    D: list = None
    Psi: list = None


def _factor_table(exact, approx):
    """approx(m, n) -> exact rational approximation of e_m^(n) or None."""
    me = exact.degree // 2
    r = [[]]
    F = [mpq(1)]
    for m in range(1, me + 1):
        col = []
        big = mpq(1)
        for n, e in enumerate(exact.e[m]):
            a = approx(m, n)
            if e is None or e == 0 or a is None or a == 0:
                col.append(None)
                continue
            v = abs(e / a)
            col.append(v)
            if v > big:
                big = v
        r.append(col)
        F.append(big)
    P = []
    acc = mpq(1)
    for v in F:
        acc *= v
        P.append(acc)
    return r, F, P


def stability_factors(computed, exact):
    """Empirical B/Phi from the working-precision values and, when the table
    carries residuals, D/Psi from value - residual."""
    b, B, Phi = _factor_table(
        exact, lambda m, n: (mpq(computed.value("e", m, n))
                             if computed.valid("e", m, n) else None))
    out = StabilityFactors(b, B, Phi)
    if computed.eps_e is not None:
        d, D, Psi = _factor_table(exact,
                                  lambda m, n: computed.exact_value("e", m, n))
        out.d, out.D, out.Psi = d, D, Psi
    return out


# -- bounds ------------------------------------------------------------------

@dataclass
class BoundRow:
    kind: str
    m: int
    n: int
    cond: object
    rel_err: object
    bound: object
    gated: bool
    passed: bool
    tag: str = ""


@dataclass
class BoundReport:
    variant: str
    rows: list = field(default_factory=list)

    def checked(self):
        return [r for r in self.rows if r.gated and not r.tag]

    def fraction_passing(self):
        rows = self.checked()
        if not rows:
            return 1.0
        return sum(r.passed for r in rows) / len(rows)

    def all_pass(self):
        return all(r.passed for r in self.checked())

    def to_csv(self, hexfloat=False):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "m", "n", "cond", "rel_err", "bound", "gated",
                    "pass", "tag"])
        for r in self.rows:
            w.writerow([r.kind, r.m, r.n, _fmt(r.cond, hexfloat),
                        _fmt(r.rel_err, hexfloat), _fmt(r.bound, hexfloat),
                        int(r.gated), int(r.passed), r.tag])
        return buf.getvalue()


def _fmt(x, hexfloat=False):
    if x is None:
        return ""
    if isinstance(x, float):
        f = x
    elif isinstance(x, type(mpfr(0))):
        f = float(x) if abs(x) < mpfr("1e308") else float("inf")
    else:
        f = oracle.round_nearest(x) if abs(x) < mpq(10) ** 308 else float("inf")
    return f.hex() if hexfloat else repr(f)


def _rup(x):
    with _up():
        return mpfr(x)


def bound_for(variant, kind, m, cond, factors):
    """A-priori bound for one cell as an upward-rounded mpfr, plus the
    gate flag.  ``m`` is the cell's column index (q_m or e_m)."""
    if cond is None:
        return None, False
    with _up():
        if variant == "qd":
            P = factors.Phi
            if kind == "e":
                f = P[m - 1]
                g = mpfr(gamma_exact(4 * m))
            elif m == 1:
                # quotient of two rounded coefficients
                f = mpq(1)
                g = mpfr(gamma_exact(3))
            else:
                f = P[m - 1]
                g = mpfr(gamma_exact(4 * (m - 1) + 2))
            b = mpfr(f) * g * cond
        else:
            P = factors.Psi
            if kind == "e":
                f = P[m - 1]
                g = mpfr(gamma_exact(11 * m - 4)) ** 2
            else:
                k = m - 1
                f = P[k]
                g = mpfr(gamma_exact(11 * k + 2)) * mpfr(gamma_exact(11 * k + 3))
            b = mpfr(U) + mpfr(f) * g * cond
    return b, f * U < GATE


def bound_check(computed, exact, factors, conds, variant):
    """Compare every cell's relative error with its bound."""
    rep = BoundReport(variant)
    for kind, m, n, x in exact.cells():
        c = conds.cond(kind, m, n)
        if x is None or not computed.has(kind, m, n):
            continue
        if x == 0:
            rep.rows.append(BoundRow(kind, m, n, None, None, None, False,
                                     True, "exact-zero"))
            continue
        if not computed.valid(kind, m, n):
            rep.rows.append(BoundRow(kind, m, n, c, None, None, False, True,
                                     "masked"))
            continue
        v = computed.value(kind, m, n)
        err = abs(mpq(v) - x) / abs(x)
        bnd, gated = bound_for(variant, kind, m, c, factors)
        ok = bnd is None or err <= mpq(bnd)
        rep.rows.append(BoundRow(kind, m, n, c, err, bnd, gated, ok))
    return rep


# -- flop models ---------------------------------------------------------------

# (F_e, F_q, F_input) with real inputs (double-double quotient of split
# coefficients) and with binary64 inputs
FLOPS = {
    "qd": {"real": (2, 2, 1), "float": (2, 2, 1)},
    "compqd": {"real": (19, 50, 100), "float": (19, 50, 21)},
    "ddqd": {"real": (40, 124, 100), "float": (40, 124, 30)},
}


def flop_model(variant, m, target, inputs="real"):
    """Flops in the dependency cone of e_m^(n) (target "e") or
    q_{m+1}^(n) (target "q")."""
    fe, fq, fi = FLOPS[variant][inputs]
    if target == "e":
        return m * m * fe + m * (m - 1) * fq + 2 * m * fi
    if target == "q":
        return m * m * fq + m * (m + 1) * fe + (2 * m + 1) * fi
    raise ValueError("target must be 'e' or 'q'")


@dataclass
class FlopRatios:
    ms: list
    compqd_qd_e: float
    compqd_qd_q: float
    ddqd_qd_e: float
    ddqd_qd_q: float

    @property
    def compqd_qd(self):
        return (self.compqd_qd_e + self.compqd_qd_q) / 2

    @property
    def ddqd_qd(self):
        return (self.ddqd_qd_e + self.ddqd_qd_q) / 2

    @property
    def compqd_ddqd(self):
        return self.compqd_qd / self.ddqd_qd


def flop_ratios(ms, inputs="float"):
    ms = list(ms)
    if not ms:
        raise ValueError("empty m range")

    def avg(var, tgt):
        s = mpq(0)
        for m in ms:
            s += mpq(flop_model(var, m, tgt, inputs),
                     flop_model("qd", m, tgt, inputs))
        return float(s / len(ms))

    return FlopRatios(ms, avg("compqd", "e"), avg("compqd", "q"),
                      avg("ddqd", "e"), avg("ddqd", "q"))


# -- instrumented counting ---------------------------------------------------

class FlopCounter:
    def __init__(self):
        self.count = 0


_counter = FlopCounter()


class CountingFloat:
    """A float that counts + - * / (negation, abs and comparisons are free)."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = float(v)

    def __repr__(self):
        return "CountingFloat(%r)" % self.v

    def __float__(self):
        return self.v

    @staticmethod
    def _val(o):
        return o.v if isinstance(o, CountingFloat) else o

    def __add__(self, o):
        _counter.count += 1
        return CountingFloat(self.v + self._val(o))

    def __radd__(self, o):
        _counter.count += 1
        return CountingFloat(self._val(o) + self.v)

    def __sub__(self, o):
        _counter.count += 1
        return CountingFloat(self.v - self._val(o))

    def __rsub__(self, o):
        _counter.count += 1
        return CountingFloat(self._val(o) - self.v)

    def __mul__(self, o):
        _counter.count += 1
        return CountingFloat(self.v * self._val(o))

    def __rmul__(self, o):
        _counter.count += 1
        return CountingFloat(self._val(o) * self.v)

    def __truediv__(self, o):
        _counter.count += 1
        return CountingFloat(self.v / self._val(o))

    def __rtruediv__(self, o):
        _counter.count += 1
        return CountingFloat(self._val(o) / self.v)

    def __neg__(self):
        return CountingFloat(-self.v)

    def __pos__(self):
        return self

    def __abs__(self):
        return CountingFloat(abs(self.v))

    def __eq__(self, o):
        return self.v == self._val(o)

    def __ne__(self, o):
        return self.v != self._val(o)

    def __lt__(self, o):
        return self.v < self._val(o)

    def __le__(self, o):
        return self.v <= self._val(o)

    def __gt__(self, o):
        return self.v > self._val(o)

    def __ge__(self, o):
        return self.v >= self._val(o)

    def __bool__(self):
        return self.v != 0

    __hash__ = None


def count_flops(fn, *args):
    """Run fn on CountingFloat arguments; return (result, flops)."""
    wrapped = [CountingFloat(a) if isinstance(a, float) else a for a in args]
    start = _counter.count
    res = fn(*wrapped)
    return res, _counter.count - start


def cell_flops(series, algorithm, init="real"):
    """Per-cell flop counts of a table build through the Python kernels.

    Returns {(kind, m, n): flops}.  Only cells that were computed appear.
    """
    from . import qdtable

    s = qdtable._series(series)
    hi = [CountingFloat(v) for v in s.hi]
    lo = [CountingFloat(v) for v in s.lo]
    counts = {}
    last = [_counter.count]

    def hook(kind, m, n):
        counts[(kind, m, n)] = _counter.count - last[0]
        last[0] = _counter.count

    N = s.degree
    if algorithm == "qd":
        _pycore.qd_fill(hi, N, hook)
    elif algorithm == "compqd":
        _pycore.compqd_fill(hi, lo, N, init, hook)
    elif algorithm == "ddqd":
        _pycore.ddqd_fill(hi, lo, N, init, hook)
    else:
        raise ValueError(algorithm)
    return counts


def cone_flops(counts, kind, m, n):
    """Total flops over the dependency cone of one cell."""
    seen = set()
    stack = [(kind, m, n)]
    total = 0
    while stack:
        cell = stack.pop()
        if cell in seen:
            continue
        seen.add(cell)
        total += counts[cell]
        k, i, j = cell
        if k == "e":
            stack.append(("q", i, j + 1))
            stack.append(("q", i, j))
            if i > 1:
                stack.append(("e", i - 1, j + 1))
        elif i > 1:
            stack.append(("e", i - 1, j + 1))
            stack.append(("e", i - 1, j))
            stack.append(("q", i - 1, j + 1))
    return total


# -- CSV ---------------------------------------------------------------------

def error_rows(computed, exact, conds, hexfloat=False):
    """CSV text of (kind, m, n, cond, rel_err) for every defined cell."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "m", "n", "cond", "rel_err", "tag"])
    for kind, m, n, x in exact.cells():
        if x is None or not computed.has(kind, m, n):
            continue
        c = conds.cond(kind, m, n)
        if x == 0:
            w.writerow([kind, m, n, "", "", "exact-zero"])
            continue
        if not computed.valid(kind, m, n):
            w.writerow([kind, m, n, _fmt(c, hexfloat), "", "masked"])
            continue
        err = oracle.rel_error(computed.value(kind, m, n), x)
        w.writerow([kind, m, n, _fmt(c, hexfloat), _fmt(err, hexfloat), ""])
    return buf.getvalue()
