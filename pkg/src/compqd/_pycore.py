"""Pure-Python kernels.

This is the fallback used when the compiled extension is unavailable, and
also the reference the compiled code is tested against bit for bit.  Every
routine only uses + - * / on its arguments (plus negation, abs and
comparisons), so it can be driven with an instrumented number type to count
floating-point operations.
"""

SPLITTER = 134217729.0  # 2**27 + 1
TINY = 2.0 ** -968      # divisors below this are treated as a breakdown
BIG = 1.7976931348623157e308

NAME = "python"

# cell status codes shared with the compiled core
OK = 0
BREAKDOWN = 1
NEAR_BREAKDOWN = 2
OVERFLOW = 3
UPSTREAM = 4


# -- error-free transformations ---------------------------------------------

def two_sum(a, b):
    x = a + b
    z = x - a
    y = (a - (x - z)) + (b - z)
    return x, y


def fast_two_sum(a, b):
    x = a + b
    y = (a - x) + b
    return x, y


def split(a):
    c = SPLITTER * a
    x = c - (c - a)
    y = a - x
    return x, y


def two_prod(a, b):
    x = a * b
    a1, a2 = split(a)
    b1, b2 = split(b)
    y = a2 * b2 - (((x - a1 * b1) - a2 * b1) - a1 * b2)
    return x, y


def div_rem(a, b):
    q = a / b
    x, y = two_prod(q, b)
    r = (a - x) - y
    return q, r


# -- double-double -----------------------------------------------------------

def add_dd_d(ah, al, b):
    th, tl = two_sum(ah, b)
    tl = al + tl
    return fast_two_sum(th, tl)


def add_dd_dd(ah, al, bh, bl):
    sh, sl = two_sum(ah, bh)
    th, tl = two_sum(al, bl)
    sl = sl + th
    th = sh + sl
    sl = sl - (th - sh)
    tl = tl + sl
    return fast_two_sum(th, tl)


def prod_dd_d(ah, al, b):
    th, tl = two_prod(ah, b)
    tl = al * b + tl
    return fast_two_sum(th, tl)


def prod_dd_dd(ah, al, bh, bl):
    th, tl = two_prod(ah, bh)
    tl = ah * bl + al * bh + tl
    return fast_two_sum(th, tl)


def div_dd_dd(ah, al, bh, bl):
    q1 = ah / bh
    th, tl = prod_dd_d(bh, bl, q1)
    rh, rl = add_dd_dd(ah, al, -th, -tl)
    q2 = rh / bh
    th, tl = prod_dd_d(bh, bl, q2)
    rh, rl = add_dd_dd(rh, rl, -th, -tl)
    q3 = rh / bh
    q1, q2 = fast_two_sum(q1, q2)
    return add_dd_d(q1, q2, q3)


def div_d_d(a, b):
    """Quotient of two doubles as a double-double (30 flops)."""
    q1 = a / b
    p1, p2 = two_prod(q1, b)
    s, e = two_sum(a, -p1)
    e = e - p2
    q2 = (s + e) / b
    return fast_two_sum(q1, q2)


# -- helpers -----------------------------------------------------------------

def _divisor_status(d):
    if d == 0:
        return BREAKDOWN
    if abs(d) < TINY:
        return NEAR_BREAKDOWN
    return OK


def _finite(x):
    return abs(x) <= BIG


def _shape(N):
    mq = (N + 1) // 2
    me = N // 2
    return mq, me


def _alloc(N, fill):
    mq, me = _shape(N)
    q = [[]] + [[fill] * (N - 2 * m + 2) for m in range(1, mq + 1)]
    e = [[]] + [[fill] * (N - 2 * m + 1) for m in range(1, me + 1)]
    return q, e


NAN = float("nan")


# -- qd table builders -------------------------------------------------------
#
# Columns are filled for m = 1, 2, ...: first every e_m^(n) of the column,
# then every q_{m+1}^(n).  The product rule needs e_m^(n+1) which is only
# available once the e column is done.  Status arrays hold OK or a reason
# code; values of failed cells are NaN.

def qd_fill(c, N, hook=None):
    mq, me = _shape(N)
    q, e = _alloc(N, NAN)
    sq, se = _alloc(N, OK)
    diags = []
    col = q[1]
    for n in range(N):
        st = _divisor_status(c[n])
        if st:
            sq[1][n] = st
            diags.append(("q", 1, n, st))
            continue
        v = c[n + 1] / c[n]
        if not _finite(v):
            sq[1][n] = OVERFLOW
            diags.append(("q", 1, n, OVERFLOW))
            continue
        col[n] = v
        if hook is not None:
            hook("q", 1, n)
    zero = 0.0
    for m in range(1, me + 1):
        qm = q[m]
        sqm = sq[m]
        em = e[m]
        sem = se[m]
        if m > 1:
            ep = e[m - 1]
            sep = se[m - 1]
        for n in range(N - 2 * m + 1):
            if sqm[n + 1] or sqm[n] or (m > 1 and sep[n + 1]):
                sem[n] = UPSTREAM
                continue
            prev = ep[n + 1] if m > 1 else zero
            v = qm[n + 1] - qm[n] + prev
            if not _finite(v):
                sem[n] = OVERFLOW
                diags.append(("e", m, n, OVERFLOW))
                continue
            em[n] = v
            if hook is not None:
                hook("e", m, n)
        if m + 1 > mq:
            continue
        qn = q[m + 1]
        sqn = sq[m + 1]
        for n in range(N - 2 * m):
            if sem[n + 1] or sem[n] or sqm[n + 1]:
                sqn[n] = UPSTREAM
                continue
            st = _divisor_status(em[n])
            if st:
                sqn[n] = st
                diags.append(("q", m + 1, n, st))
                continue
            v = (em[n + 1] / em[n]) * qm[n + 1]
            if not _finite(v):
                sqn[n] = OVERFLOW
                diags.append(("q", m + 1, n, OVERFLOW))
                continue
            qn[n] = v
            if hook is not None:
                hook("q", m + 1, n)
    return q, e, sq, se, diags


def _q1_comp(ch, cl, N, init, q, eq, sq, diags, hook):
    for n in range(N):
        st = _divisor_status(ch[n])
        if st:
            sq[1][n] = st
            diags.append(("q", 1, n, st))
            continue
        if init == "float":
            v, r = div_rem(ch[n + 1], ch[n])
            w = r / ch[n]
            # stored residual is eps with value = hat - eps
            x, y = v, -w
        else:
            x, lo = div_dd_dd(ch[n + 1], cl[n + 1], ch[n], cl[n])
            y = -lo
        if not (_finite(x) and _finite(y)):
            sq[1][n] = OVERFLOW
            diags.append(("q", 1, n, OVERFLOW))
            continue
        q[1][n] = x
        eq[1][n] = y
        if hook is not None:
            hook("q", 1, n)


def compqd_fill(ch, cl, N, init="real", hook=None):
    """Compensated table.  Returns values, residuals (true = value - eps)."""
    mq, me = _shape(N)
    q, e = _alloc(N, NAN)
    eq, ee = _alloc(N, NAN)
    sq, se = _alloc(N, OK)
    diags = []
    _q1_comp(ch, cl, N, init, q, eq, sq, diags, hook)
    zero = 0.0
    for m in range(1, me + 1):
        qm, eqm, sqm = q[m], eq[m], sq[m]
        em, eem, sem = e[m], ee[m], se[m]
        if m > 1:
            ep, eep, sep = e[m - 1], ee[m - 1], se[m - 1]
        for n in range(N - 2 * m + 1):
            if sqm[n + 1] or sqm[n] or (m > 1 and sep[n + 1]):
                sem[n] = UPSTREAM
                continue
            if m > 1:
                pe, pee = ep[n + 1], eep[n + 1]
            else:
                pe, pee = zero, zero
            s, mu1 = two_sum(qm[n + 1], -qm[n])
            eh, mu2 = two_sum(s, pe)
            eps = eqm[n + 1] - eqm[n] + pee - mu1 - mu2
            eh, neps = fast_two_sum(eh, -eps)
            if not (_finite(eh) and _finite(neps)):
                sem[n] = OVERFLOW
                diags.append(("e", m, n, OVERFLOW))
                continue
            em[n] = eh
            eem[n] = -neps
            if hook is not None:
                hook("e", m, n)
        if m + 1 > mq:
            continue
        qn, eqn, sqn = q[m + 1], eq[m + 1], sq[m + 1]
        for n in range(N - 2 * m):
            if sem[n + 1] or sem[n] or sqm[n + 1]:
                sqn[n] = UPSTREAM
                continue
            d = em[n]
            st = _divisor_status(d)
            if st:
                sqn[n] = st
                diags.append(("q", m + 1, n, st))
                continue
            t, mu3 = div_rem(em[n + 1], d)
            qh, mu4 = two_prod(t, qm[n + 1])
            eps = (eqm[n + 1] * em[n + 1] + eem[n + 1] * qm[n + 1]
                   - eem[n] * qh - mu3 * qm[n + 1] - mu4 * d) / d
            qh, neps = fast_two_sum(qh, -eps)
            if not (_finite(qh) and _finite(neps)):
                sqn[n] = OVERFLOW
                diags.append(("q", m + 1, n, OVERFLOW))
                continue
            qn[n] = qh
            eqn[n] = -neps
            if hook is not None:
                hook("q", m + 1, n)
    return q, eq, e, ee, sq, se, diags


def ddqd_fill(ch, cl, N, init="real", hook=None):
    """Double-double table.  Returns hi and lo planes (true ~ hi + lo)."""
    mq, me = _shape(N)
    qh, eh = _alloc(N, NAN)
    ql, el = _alloc(N, NAN)
    sq, se = _alloc(N, OK)
    diags = []
    for n in range(N):
        st = _divisor_status(ch[n])
        if st:
            sq[1][n] = st
            diags.append(("q", 1, n, st))
            continue
        if init == "float":
            x, y = div_d_d(ch[n + 1], ch[n])
        else:
            x, y = div_dd_dd(ch[n + 1], cl[n + 1], ch[n], cl[n])
        if not (_finite(x) and _finite(y)):
            sq[1][n] = OVERFLOW
            diags.append(("q", 1, n, OVERFLOW))
            continue
        qh[1][n] = x
        ql[1][n] = y
        if hook is not None:
            hook("q", 1, n)
    zero = 0.0
    for m in range(1, me + 1):
        qhm, qlm, sqm = qh[m], ql[m], sq[m]
        ehm, elm, sem = eh[m], el[m], se[m]
        if m > 1:
            ehp, elp, sep = eh[m - 1], el[m - 1], se[m - 1]
        for n in range(N - 2 * m + 1):
            if sqm[n + 1] or sqm[n] or (m > 1 and sep[n + 1]):
                sem[n] = UPSTREAM
                continue
            if m > 1:
                ph, pl = ehp[n + 1], elp[n + 1]
            else:
                ph, pl = zero, zero
            rh, rl = add_dd_dd(qhm[n + 1], qlm[n + 1], -qhm[n], -qlm[n])
            x, y = add_dd_dd(rh, rl, ph, pl)
            if not (_finite(x) and _finite(y)):
                sem[n] = OVERFLOW
                diags.append(("e", m, n, OVERFLOW))
                continue
            ehm[n] = x
            elm[n] = y
            if hook is not None:
                hook("e", m, n)
        if m + 1 > mq:
            continue
        qhn, qln, sqn = qh[m + 1], ql[m + 1], sq[m + 1]
        for n in range(N - 2 * m):
            if sem[n + 1] or sem[n] or sqm[n + 1]:
                sqn[n] = UPSTREAM
                continue
            st = _divisor_status(ehm[n])
            if st:
                sqn[n] = st
                diags.append(("q", m + 1, n, st))
                continue
            th, tl = div_dd_dd(ehm[n + 1], elm[n + 1], ehm[n], elm[n])
            x, y = prod_dd_dd(th, tl, qhm[n + 1], qlm[n + 1])
            if not (_finite(x) and _finite(y)):
                sqn[n] = OVERFLOW
                diags.append(("q", m + 1, n, OVERFLOW))
                continue
            qhn[n] = x
            qln[n] = y
            if hook is not None:
                hook("q", m + 1, n)
    return qh, ql, eh, el, sq, se, diags


# -- progressive form --------------------------------------------------------
#
# State is one anti-diagonal: q[1..k] and e[0..k] with e[0] = e[k] = 0.
# A sweep first forms the whole new q row, then the new e row, because the
# product rule needs the new q_{m+1}.

def proqd_run(b, tol, max_sweeps):
    """Returns (q, e, sweeps, max_e, status, where).

    status: 0 converged, 1 breakdown, 2 not converged.
    """
    k = len(b) - 1
    q = [0.0] * (k + 2)
    e = [0.0] * (k + 1)
    for i in range(k + 1):
        if b[i] == 0:
            return q[1:k + 1], e, 0, NAN, 1, ("b", i)
    q[1] = -b[1] / b[0]
    for m in range(1, k):
        e[m] = b[m + 1] / b[m]
    sweeps = 0
    maxe = NAN
    while sweeps < max_sweeps:
        for m in range(1, k + 1):
            q[m] = e[m] - e[m - 1] + q[m]
        maxe = 0.0
        for m in range(1, k):
            d = q[m]
            if d == 0 or abs(d) < TINY:
                return q[1:k + 1], e, sweeps, maxe, 1, ("q", m)
            e[m] = (q[m + 1] / d) * e[m]
            a = abs(e[m])
            if a > maxe:
                maxe = a
        sweeps += 1
        if maxe <= tol:
            return q[1:k + 1], e, sweeps, maxe, 0, None
    return q[1:k + 1], e, sweeps, maxe, 2, None


def compproqd_run(bh, bl, tol, max_sweeps):
    """Compensated progressive sweep.  Returns (q, eq, e, ee, sweeps, max_e,
    status, where); true values are q - eq."""
    k = len(bh) - 1
    q = [0.0] * (k + 2)
    eq = [0.0] * (k + 2)
    e = [0.0] * (k + 1)
    ee = [0.0] * (k + 1)
    for i in range(k + 1):
        if bh[i] == 0:
            return q[1:k + 1], eq[1:k + 1], e, ee, 0, NAN, 1, ("b", i)
    x, lo = div_dd_dd(-bh[1], -bl[1], bh[0], bl[0])
    q[1], eq[1] = x, -lo
    for m in range(1, k):
        x, lo = div_dd_dd(bh[m + 1], bl[m + 1], bh[m], bl[m])
        e[m], ee[m] = x, -lo
    sweeps = 0
    maxe = NAN
    while sweeps < max_sweeps:
        for m in range(1, k + 1):
            s, mu1 = two_sum(e[m], -e[m - 1])
            qh, mu2 = two_sum(s, q[m])
            eps = -mu1 - mu2 + ee[m] - ee[m - 1] + eq[m]
            qh, neps = fast_two_sum(qh, -eps)
            q[m] = qh
            eq[m] = -neps
        maxe = 0.0
        for m in range(1, k):
            d = q[m]
            if d == 0 or abs(d) < TINY:
                return (q[1:k + 1], eq[1:k + 1], e, ee, sweeps, maxe, 1,
                        ("q", m))
            t, mu3 = div_rem(q[m + 1], d)
            eh, mu4 = two_prod(t, e[m])
            eps = (-(mu3 * e[m]) - mu4 * d + ee[m] * q[m + 1]
                   + eq[m + 1] * e[m] - eq[m] * eh) / d
            eh, neps = fast_two_sum(eh, -eps)
            e[m] = eh
            ee[m] = -neps
            a = abs(eh)
            if a > maxe:
                maxe = a
        sweeps += 1
        if maxe <= tol:
            return q[1:k + 1], eq[1:k + 1], e, ee, sweeps, maxe, 0, None
    return q[1:k + 1], eq[1:k + 1], e, ee, sweeps, maxe, 2, None
