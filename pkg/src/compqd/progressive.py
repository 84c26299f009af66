"""Progressive qd scheme for all zeros of a polynomial.

Coefficients are given leading term first, p(x) = b_0 x^k + ... + b_k.  With
that orientation q_1 = -b_1/b_0 and the q columns converge to the zeros in
order of decreasing modulus (checked on (x-1)(x-2)(x-4) in the tests).
The boundary e values e_0 and e_k stay 0.0 throughout.
"""

import math
from dataclasses import dataclass, field

from . import backend as _backend
from . import oracle
from .errors import BreakdownError, ConvergenceError


@dataclass
class PolyInput:
    """b_0..b_k as binary64 pairs, leading coefficient first."""
    hi: list
    lo: list
    exact: list = None

    def __post_init__(self):
        if len(self.hi) != len(self.lo):
            raise ValueError("hi and lo have different lengths")
        if len(self.hi) < 2:
            raise ValueError("polynomial degree must be at least 1")
        for h, l in zip(self.hi, self.lo):
            if not (math.isfinite(h) and math.isfinite(l)):
                raise ValueError("coefficients must be finite")
        if self.hi[0] == 0 or self.hi[-1] == 0:
            raise ValueError("b_0 and b_k must be nonzero")

    @property
    def degree(self):
        return len(self.hi) - 1

    @classmethod
    def from_exact(cls, values, ascending=False):
        vals = [oracle.to_mpq(v) for v in values]
        if ascending:
            vals = vals[::-1]
        hi, lo = [], []
        for v in vals:
            h, l, _ = oracle.real_to_dd(v)
            hi.append(h)
            lo.append(l)
        return cls(hi, lo, vals)

    @classmethod
    def from_floats(cls, values, ascending=False):
        hi = [float(v) for v in values]
        if ascending:
            hi = hi[::-1]
        out = cls(hi, [0.0] * len(hi))
        out.exact = [oracle.mpq(v) for v in hi]
        return out


@dataclass
class ProgressiveState:
    """Last anti-diagonal of the scheme plus run diagnostics."""
    q: list
    e: list
    eps_q: list = None
    eps_e: list = None
    sweeps: int = 0
    tol: float = 0.0
    max_e: float = float("nan")
    converged: bool = False

    def values(self):
        if self.eps_q is None:
            return list(self.q)
        return [v - r for v, r in zip(self.q, self.eps_q)]


@dataclass
class ProgressiveResult:
    zeros: list                 # ascending
    natural_order: list         # as the columns deliver them
    state: ProgressiveState
    status: str = "converged"
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.status == "converged"

    @property
    def sweeps(self):
        return self.state.sweeps

    @property
    def max_e(self):
        return self.state.max_e


def _poly(poly):
    if isinstance(poly, PolyInput):
        return poly
    return PolyInput.from_exact(poly)


def _finish(state, status, where, strict):
    est = state.values()
    res = ProgressiveResult(sorted(est), est, state, status,
                            {"sweeps": state.sweeps, "max_e": state.max_e})
    if status == "breakdown":
        raise BreakdownError("progressive breakdown at %s" % (where,),
                             partial=res)
    if status == "not converged" and strict:
        raise ConvergenceError("not converged after %d sweeps" % state.sweeps,
                               partial=res)
    return res


_STATUS = {0: "converged", 1: "breakdown", 2: "not converged"}


def proqd(poly, tol=1e-16, max_sweeps=None, backend=None, strict=False):
    """Zeros of a polynomial by the classical progressive qd scheme.

    Stops once max |e| over the newest row is <= tol.  Exhausting
    max_sweeps (default 10*k) returns the current estimates with status
    "not converged", or raises ConvergenceError when ``strict``.
    """
    p = _poly(poly)
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = p.degree
    if max_sweeps is None:
        max_sweeps = 10 * k
    core = _backend.get(backend)
    q, e, sweeps, maxe, st, where = core.proqd_run(p.hi, tol, max_sweeps)
    state = ProgressiveState(list(q), list(e), None, None, sweeps, tol, maxe,
                             st == 0)
    return _finish(state, _STATUS[st], where, strict)


def comp_proqd(poly, tol=1e-16, max_sweeps=None, backend=None, strict=False):
    """Compensated progressive qd: each q and e carries its rounding error.

    The inputs are the double-double quotients of the split coefficients.
    Returned zeros are the refined values q - eps_q.
    """
    p = _poly(poly)
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = p.degree
    if max_sweeps is None:
        max_sweeps = 10 * k
    core = _backend.get(backend)
    q, eq, e, ee, sweeps, maxe, st, where = core.compproqd_run(
        p.hi, p.lo, tol, max_sweeps)
    state = ProgressiveState(list(q), list(e), list(eq), list(ee), sweeps,
                             tol, maxe, st == 0)
    return _finish(state, _STATUS[st], where, strict)


def exact_sweeps(poly, sweeps):
    """Run the plain recurrence in rational arithmetic.

    Returns the q row after each sweep (used to check convergence of the
    scheme itself, independently of rounding).
    """
    b = [oracle.to_mpq(v) for v in (poly.exact if isinstance(poly, PolyInput)
                                    else poly)]
    k = len(b) - 1
    zero = oracle.mpq(0)
    q = [zero] * (k + 2)
    e = [zero] * (k + 1)
    q[1] = -b[1] / b[0]
    for m in range(1, k):
        e[m] = b[m + 1] / b[m]
    rows = []
    for _ in range(sweeps):
        for m in range(1, k + 1):
            q[m] = e[m] - e[m - 1] + q[m]
        for m in range(1, k):
            if q[m] == 0:
                raise BreakdownError("progressive breakdown at ('q', %d)" % m)
            e[m] = q[m + 1] / q[m] * e[m]
        rows.append(q[1:k + 1])
    return rows
