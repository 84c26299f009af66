"""Exact rational reference computations.

All values are ``gmpy2.mpq``.  Conversions to binary64 go through Python's
int true division, which is correctly rounded (``float(mpq)`` is not).
"""

import random
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from .errors import OracleError

BigReal = type(mpq(0))

U = mpq(1, 2 ** 53)


def to_mpq(x):
    """Exact rational from a float, int, str ("p/q", decimal, hex-float) or mpq."""
    if isinstance(x, BigReal):
        return x
    if isinstance(x, float):
        return mpq(x)
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if "0x" in s.lower():
            return mpq(float.fromhex(s))
        return mpq(s)
    return mpq(x)


def round_nearest(x):
    """Round an exact rational to the nearest binary64 value (ties to even)."""
    x = to_mpq(x)
    return int(x.numerator) / int(x.denominator)


def real_to_dd(x):
    """Split x into (hi, lo, dropped) with hi = fl(x), lo = fl(x - hi).

    ``dropped`` is the exact rational x - hi - lo (the tail a pair cannot hold).
    """
    x = to_mpq(x)
    hi = round_nearest(x)
    r = x - mpq(hi)
    lo = round_nearest(r)
    return hi, lo, r - mpq(lo)


def pair_value(hi, eps=0.0):
    """Exact value of a compensated pair, hi - eps."""
    return mpq(hi) - mpq(eps)


def rel_error(approx, exact, with_flag=False):
    """|approx - exact| / |exact|, exact then rounded once.

    Falls back to the absolute error when exact == 0; ``with_flag`` returns
    (value, is_absolute).
    """
    a = to_mpq(approx)
    x = to_mpq(exact)
    if x == 0:
        v = round_nearest(abs(a))
        return (v, True) if with_flag else v
    v = round_nearest(abs(a - x) / abs(x))
    return (v, False) if with_flag else v


# -- generators --------------------------------------------------------------

def gen_taylor_exp_rational(pole_factors, degree):
    """Taylor coefficients at 0 of exp(x) / prod(x - a_i)."""
    factors = [to_mpq(a) for a in pole_factors]
    if any(a == 0 for a in factors):
        raise OracleError("invalid factor: pole at the origin")
    if degree < 0:
        raise OracleError("degree must be non-negative")
    fact = mpq(1)
    coeffs = []
    for n in range(degree + 1):
        if n:
            fact *= n
        coeffs.append(1 / fact)
    for a in factors:
        # 1/(x - a) = -sum x^n / a^(n+1)
        g = []
        p = -1 / a
        for n in range(degree + 1):
            g.append(p)
            p /= a
        coeffs = [sum((coeffs[i] * g[n - i] for i in range(n + 1)), mpq(0))
                  for n in range(degree + 1)]
    return coeffs


def gen_laguerre(degree):
    """Coefficients of L_degree in ascending powers of x."""
    if degree < 0:
        raise OracleError("degree must be non-negative")
    prev = [mpq(1)]
    if degree == 0:
        return prev
    cur = [mpq(1), mpq(-1)]
    for k in range(1, degree):
        nxt = [mpq(0)] * (k + 2)
        a = mpq(-1, k + 1)
        b = mpq(2 * k + 1, k + 1)
        c = mpq(k, k + 1)
        for i, v in enumerate(cur):
            nxt[i + 1] += a * v
            nxt[i] += b * v
        for i, v in enumerate(prev):
            nxt[i] -= c * v
        prev, cur = cur, nxt
    return cur


def gen_random_poly(degree, seed):
    """degree+1 binary64 values uniform in (-1, 1), returned as exact rationals."""
    rng = random.Random(seed)
    out = []
    while len(out) < degree + 1:
        v = rng.uniform(-1.0, 1.0)
        if -1.0 < v < 1.0 and v != 0.0:
            out.append(mpq(v))
    return out


# -- exact qd table ----------------------------------------------------------

@dataclass
class ExactQdTable:
    degree: int
    q: list           # q[m][n], None where undefined
    e: list
    diagnostics: list = field(default_factory=list)

    @property
    def mq(self):
        return (self.degree + 1) // 2

    @property
    def me(self):
        return self.degree // 2

    def cells(self):
        for m in range(1, self.mq + 1):
            for n, v in enumerate(self.q[m]):
                yield "q", m, n, v
        for m in range(1, self.me + 1):
            for n, v in enumerate(self.e[m]):
                yield "e", m, n, v


def exact_qd(series):
    """Run the rhombus rules without rounding.  Cells that would divide by
    zero (and everything depending on them) are None."""
    c = [to_mpq(x) for x in series]
    N = len(c) - 1
    if N < 1:
        raise OracleError("need at least two coefficients")
    mq, me = (N + 1) // 2, N // 2
    q = [[]] + [[None] * (N - 2 * m + 2) for m in range(1, mq + 1)]
    e = [[]] + [[None] * (N - 2 * m + 1) for m in range(1, me + 1)]
    diags = []
    for n in range(N):
        if c[n] == 0:
            diags.append(("q", 1, n, "breakdown"))
        else:
            q[1][n] = c[n + 1] / c[n]
    zero = mpq(0)
    for m in range(1, me + 1):
        qm, em = q[m], e[m]
        for n in range(N - 2 * m + 1):
            prev = e[m - 1][n + 1] if m > 1 else zero
            if qm[n + 1] is None or qm[n] is None or prev is None:
                continue
            em[n] = qm[n + 1] - qm[n] + prev
        if m + 1 > mq:
            continue
        for n in range(N - 2 * m):
            if em[n + 1] is None or em[n] is None or qm[n + 1] is None:
                continue
            if em[n] == 0:
                diags.append(("q", m + 1, n, "breakdown"))
                continue
            q[m + 1][n] = em[n + 1] / em[n] * qm[n + 1]
    return ExactQdTable(N, q, e, diags)


# -- Hankel determinants -----------------------------------------------------

def _bareiss(rows):
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    k = len(a)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[i][i]
        for r in range(i + 1, k):
            ar = a[r]
            ai = a[i]
            f = ar[i]
            for j in range(i + 1, k):
                ar[j] = (piv * ar[j] - f * ai[j]) // prev
            ar[i] = 0
        prev = piv
    return sign * a[k - 1][k - 1]


def hankel(series, m, n):
    """H_m^(n) = det[c_{n+i+j}]_{i,j<m}; H_0 = 1."""
    if m < 0 or n < 0:
        raise OracleError("indices must be non-negative")
    if m == 0:
        return mpq(1)
    c = [to_mpq(x) for x in series]
    if n + 2 * m - 2 >= len(c):
        raise OracleError("series too short for H_%d^(%d)" % (m, n))
    block = c[n:n + 2 * m - 1]
    den = 1
    for v in block:
        den = gmpy2.lcm(den, v.denominator)
    ints = [int(v * den) for v in block]
    det = _bareiss([[ints[i + j] for j in range(m)] for i in range(m)])
    return mpq(det) / mpq(den) ** m


def hankel_q(series, m, n):
    """q_m^(n) from Hankel ratios, or None when a denominator vanishes."""
    num = hankel(series, m, n + 1) * hankel(series, m - 1, n)
    den = hankel(series, m, n) * hankel(series, m - 1, n + 1)
    return None if den == 0 else num / den


def hankel_e(series, m, n):
    num = hankel(series, m + 1, n) * hankel(series, m - 1, n + 1)
    den = hankel(series, m, n) * hankel(series, m, n + 1)
    return None if den == 0 else num / den


# -- polynomial zeros --------------------------------------------------------

def _trim(p):
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
    return p


def _prem(a, b):
    """Remainder of a / b, coefficient lists with the leading term first."""
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    return _trim(a) if a else [mpq(0)]


def _deriv(p):
    d = len(p) - 1
    return [p[i] * (d - i) for i in range(d)]


def _sturm(p):
    seq = [p, _deriv(p)]
    while len(seq[-1]) > 1:
        r = _prem(seq[-2], seq[-1])
        if len(r) == 1 and r[0] == 0:
            break
        seq.append([-v for v in r])
    return seq


def _eval(p, x):
    acc = mpq(0)
    for v in p:
        acc = acc * x + v
    return acc


def _changes(seq, x):
    last = 0
    n = 0
    for p in seq:
        v = _eval(p, x)
        s = (v > 0) - (v < 0)
        if s == 0:
            continue
        if last and s != last:
            n += 1
        last = s
    return n


def reference_zeros(coeffs, precision_bits=200, real_only=False):
    """All real zeros of sum coeffs[i] x^(k-i) (leading coefficient first).

    Zeros are isolated with a Sturm sequence and bisected in exact dyadic
    arithmetic until each bracket is narrower than 2^-precision_bits.
    Returns mpq midpoints sorted ascending.  With ``real_only`` a polynomial
    with non-real zeros is accepted and only its real zeros are returned.
    """
    p = _trim([to_mpq(v) for v in coeffs])
    k = len(p) - 1
    if k < 1:
        return []
    seq = _sturm(p)
    if len(seq[-1]) > 1 and not real_only:
        raise OracleError("repeated zeros unsupported")
    bound = 1 + max(abs(v / p[0]) for v in p[1:])
    lo, hi = -bound, bound
    total = _changes(seq, lo) - _changes(seq, hi)
    if total != k and not real_only:
        raise OracleError("non-real zeros unsupported")
    # isolate
    stack = [(lo, hi, _changes(seq, lo), _changes(seq, hi))]
    brackets = []
    while stack:
        a, b, ca, cb = stack.pop()
        cnt = ca - cb
        if cnt == 0:
            continue
        if cnt == 1:
            brackets.append((a, b))
            continue
        mid = (a + b) / 2
        cm = _changes(seq, mid)
        stack.append((a, mid, ca, cm))
        stack.append((mid, b, cm, cb))
    # refine on the sign of p
    ip = _integer_poly(p)
    width = mpq(1, 2 ** precision_bits)
    zeros = []
    for a, b in brackets:
        fa = _sign_at(ip, a)
        if _sign_at(ip, b) == 0:
            zeros.append(b)
            continue
        while b - a > width:
            mid = (a + b) / 2
            fm = _sign_at(ip, mid)
            if fm == 0:
                a = b = mid
                break
            if fm == fa:
                a = mid
            else:
                b = mid
        zeros.append((a + b) / 2)
    zeros.sort()
    return zeros


def _integer_poly(p):
    den = 1
    for v in p:
        den = gmpy2.lcm(den, v.denominator)
    return [int(v * den) for v in p]


def _sign_at(ip, x):
    """Sign of an integer polynomial at a rational point, in integers."""
    num = int(x.numerator)
    den = int(x.denominator)
    acc = 0
    dpow = 1
    for c in ip:
        acc = acc * num + c * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)
