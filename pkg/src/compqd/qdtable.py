"""qd tables from power-series coefficients.

Three engines share one table layout: the classical rhombus rules in
binary64, the compensated variant that carries a residual per cell, and a
double-double variant.  Columns are indexed as in the usual qd scheme:
q[m][n] for m = 1..(N+1)//2, n = 0..N-2m+1 and e[m][n] for m = 1..N//2,
n = 0..N-2m.
"""

import json
import math
from dataclasses import dataclass, field

from . import backend as _backend
from . import oracle
from .errors import BreakdownError, QDError

STATUS_NAMES = {
    0: "ok",
    1: "breakdown",
    2: "near-breakdown",
    3: "overflow",
    4: "upstream",
}


@dataclass
class SeriesInput:
    """Coefficients c_0..c_N split into binary64 pairs.

    ``exact`` keeps the rational values when they are known.
    """
    hi: list
    lo: list
    exact: list = None

    def __post_init__(self):
        if len(self.hi) != len(self.lo):
            raise ValueError("hi and lo have different lengths")
        if len(self.hi) < 2:
            raise ValueError("need at least two coefficients")
        for h, l in zip(self.hi, self.lo):
            if not (math.isfinite(h) and math.isfinite(l)):
                raise ValueError("coefficients must be finite")
        if self.hi[0] == 0:
            raise ValueError("c_0 must be nonzero")

    @property
    def degree(self):
        return len(self.hi) - 1

    @classmethod
    def from_exact(cls, values):
        vals = [oracle.to_mpq(v) for v in values]
        hi, lo = [], []
        for v in vals:
            h, l, _ = oracle.real_to_dd(v)
            hi.append(h)
            lo.append(l)
        return cls(hi, lo, vals)

    @classmethod
    def from_floats(cls, values):
        hi = [float(v) for v in values]
        out = cls(hi, [0.0] * len(hi))
        out.exact = [oracle.mpq(v) for v in hi]
        return out

    def is_float(self):
        return all(l == 0 for l in self.lo)


@dataclass
class QdTable:
    algorithm: str
    degree: int
    q: list
    e: list
    status_q: list
    status_e: list
    eps_q: list = None
    eps_e: list = None
    init: str = None
    diagnostics: list = field(default_factory=list)

    @property
    def mq(self):
        return (self.degree + 1) // 2

    @property
    def me(self):
        return self.degree // 2

    def _planes(self, kind):
        if kind == "q":
            return self.q, self.eps_q, self.status_q
        if kind == "e":
            return self.e, self.eps_e, self.status_e
        raise ValueError(kind)

    def has(self, kind, m, n):
        v, _, _ = self._planes(kind)
        return 1 <= m < len(v) and 0 <= n < len(v[m])

    def valid(self, kind, m, n):
        _, _, s = self._planes(kind)
        return self.has(kind, m, n) and s[m][n] == 0

    def value(self, kind, m, n):
        v, _, s = self._planes(kind)
        return v[m][n] if s[m][n] == 0 else None

    def residual(self, kind, m, n):
        _, r, s = self._planes(kind)
        if r is None or s[m][n] != 0:
            return 0.0
        return r[m][n]

    def exact_value(self, kind, m, n):
        """Rational value of the cell including its residual, value - eps."""
        v = self.value(kind, m, n)
        if v is None:
            return None
        return oracle.pair_value(v, self.residual(kind, m, n))

    def refined(self, kind, m, n):
        """value - eps rounded to binary64."""
        v = self.value(kind, m, n)
        if v is None:
            return None
        return v - self.residual(kind, m, n)

    def cells(self):
        for m in range(1, self.mq + 1):
            for n in range(len(self.q[m])):
                yield "q", m, n
        for m in range(1, self.me + 1):
            for n in range(len(self.e[m])):
                yield "e", m, n

    def masked_count(self):
        return sum(1 for k, m, n in self.cells() if not self.valid(k, m, n))

    # -- serialization -------------------------------------------------------

    def to_dict(self, hexfloat=False):
        def enc(x):
            return x.hex() if hexfloat else x

        def plane(vals, stat):
            if vals is None:
                return None
            return [[enc(v) if s == 0 else None for v, s in zip(row, srow)]
                    for row, srow in zip(vals[1:], stat[1:])]

        return {
            "algorithm": self.algorithm,
            "degree": self.degree,
            "init": self.init,
            "float_format": "hex" if hexfloat else "decimal",
            "q": plane(self.q, self.status_q),
            "e": plane(self.e, self.status_e),
            "eps_q": plane(self.eps_q, self.status_q),
            "eps_e": plane(self.eps_e, self.status_e),
            "mask": {
                "q": [[s != 0 for s in row] for row in self.status_q[1:]],
                "e": [[s != 0 for s in row] for row in self.status_e[1:]],
            },
            "diagnostics": [
                {"kind": k, "m": m, "n": n, "reason": STATUS_NAMES[st]}
                for k, m, n, st in self.diagnostics
            ],
        }

    def to_json(self, hexfloat=False, indent=None):
        return json.dumps(self.to_dict(hexfloat), indent=indent)

    @classmethod
    def from_dict(cls, d):
        hexfloat = d.get("float_format") == "hex"
        nan = float("nan")

        def dec(x):
            if x is None:
                return nan
            return float.fromhex(x) if hexfloat else float(x)

        def plane(p):
            if p is None:
                return None
            return [[]] + [[dec(v) for v in row] for row in p]

        codes = {v: k for k, v in STATUS_NAMES.items()}
        diags = [(x["kind"], x["m"], x["n"], codes[x["reason"]])
                 for x in d.get("diagnostics", [])]
        origin = {(k, m, n): st for k, m, n, st in diags}

        def status(kind):
            rows = d["mask"][kind]
            return [[]] + [[origin.get((kind, m, n), 4) if bad else 0
                            for n, bad in enumerate(row)]
                           for m, row in enumerate(rows, start=1)]

        tbl = cls if d.get("eps_q") is None else CompQdTable
        return tbl(
            algorithm=d["algorithm"], degree=d["degree"],
            q=plane(d["q"]), e=plane(d["e"]),
            status_q=status("q"), status_e=status("e"),
            eps_q=plane(d.get("eps_q")), eps_e=plane(d.get("eps_e")),
            init=d.get("init"), diagnostics=diags)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


class CompQdTable(QdTable):
    """Table whose cells carry residuals: true value ~ value - eps."""


# -- q_1 initializations -----------------------------------------------------

def init_q1_real(series, backend=None):
    """q_1^(n) from a double-double division of the split coefficients.

    Returns a list of (value, eps) with value - eps ~ c_{n+1}/c_n.
    """
    core = _backend.get(backend)
    out = []
    for n in range(series.degree):
        if series.hi[n] == 0:
            raise BreakdownError("q1 breakdown at index %d" % n, partial=out)
        h, l = core.div_dd_dd(series.hi[n + 1], series.lo[n + 1],
                              series.hi[n], series.lo[n])
        out.append((h, -l))
    return out


def init_q1_float(coeffs, backend=None):
    """q_1^(n) for binary64 coefficients: DivRem, then r / c_n."""
    core = _backend.get(backend)
    c = [float(x) for x in coeffs]
    out = []
    for n in range(len(c) - 1):
        if c[n] == 0:
            raise BreakdownError("q1 breakdown at index %d" % n, partial=out)
        v, r = core.div_rem(c[n + 1], c[n])
        out.append((v, -(r / c[n])))
    return out


# -- builders ----------------------------------------------------------------

def _series(series):
    if isinstance(series, SeriesInput):
        return series
    return SeriesInput.from_exact(series)


def build_qd(series, backend=None, hook=None):
    """Classical qd table in binary64, q_1 from plain division of c^(h)."""
    s = _series(series)
    core = _backend.get(backend)
    if hook is not None:
        core = _backend.get("python")
    q, e, sq, se, diags = core.qd_fill(s.hi, s.degree, hook)
    return QdTable("qd", s.degree, q, e, sq, se, None, None, "float", diags)


def build_compqd(series, init="real", backend=None, hook=None):
    """Compensated qd table.  init is "real" (double-double quotient of the
    split coefficients) or "float" (DivRem on c^(h) only)."""
    if init not in ("real", "float"):
        raise ValueError("init must be 'real' or 'float'")
    s = _series(series)
    core = _backend.get(backend)
    if hook is not None:
        core = _backend.get("python")
    q, eq, e, ee, sq, se, diags = core.compqd_fill(s.hi, s.lo, s.degree,
                                                    init, hook)
    return CompQdTable("compqd", s.degree, q, e, sq, se, eq, ee, init, diags)


def build_ddqd(series, init="real", backend=None, hook=None):
    """qd table in double-double arithmetic.  Cell values are the high
    parts; eps = -lo so that value - eps is the pair's value."""
    if init not in ("real", "float"):
        raise ValueError("init must be 'real' or 'float'")
    s = _series(series)
    core = _backend.get(backend)
    if hook is not None:
        core = _backend.get("python")
    qh, ql, eh, el, sq, se, diags = core.ddqd_fill(s.hi, s.lo, s.degree,
                                                   init, hook)
    neg = lambda plane: [[-v for v in row] for row in plane]
    return CompQdTable("ddqd", s.degree, qh, eh, sq, se, neg(ql), neg(el),
                       init, diags)


BUILDERS = {
    "qd": build_qd,
    "compqd": build_compqd,
    "ddqd": build_ddqd,
}


def build(series, algorithm="compqd", init="real", backend=None):
    if algorithm == "qd":
        return build_qd(series, backend=backend)
    if algorithm in BUILDERS:
        return BUILDERS[algorithm](series, init=init, backend=backend)
    raise QDError("unknown algorithm %r" % (algorithm,))


def from_exact_table(t):
    """Wrap an oracle table in the QdTable layout (values rounded once)."""
    nan = float("nan")

    def plane(cols):
        vals = [[]] + [[oracle.round_nearest(v) if v is not None else nan
                        for v in col] for col in cols[1:]]
        stat = [[]] + [[0 if v is not None else 4 for v in col]
                       for col in cols[1:]]
        return vals, stat

    q, sq = plane(t.q)
    e, se = plane(t.e)
    codes = {"breakdown": 1}
    diags = [(k, m, n, codes.get(r, 1)) for k, m, n, r in t.diagnostics]
    for k, m, n, st in diags:
        (sq if k == "q" else se)[m][n] = st
    return QdTable("exact", t.degree, q, e, sq, se, None, None, None, diags)
