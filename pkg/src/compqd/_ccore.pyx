# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Same functions, arguments and results as _pycore, operation for operation,
so the two backends agree bit for bit.  Must be compiled without FMA
contraction (-ffp-contract=off) and without fast-math.
"""

from libc.math cimport fabs
from libc.stdlib cimport malloc, free

cdef double SPLITTER_ = 134217729.0
cdef double TINY_ = 2.0 ** -968
cdef double BIG_ = 1.7976931348623157e308

SPLITTER = SPLITTER_
TINY = TINY_
BIG = BIG_
NAME = "cython"

OK = 0
BREAKDOWN = 1
NEAR_BREAKDOWN = 2
OVERFLOW = 3
UPSTREAM = 4

NAN = float("nan")
cdef double NAN_ = float("nan")


# -- error-free transformations ---------------------------------------------

cdef inline void c_two_sum(double a, double b, double* x, double* y) nogil:
    cdef double s = a + b
    cdef double z = s - a
    y[0] = (a - (s - z)) + (b - z)
    x[0] = s


cdef inline void c_fast_two_sum(double a, double b, double* x, double* y) nogil:
    cdef double s = a + b
    y[0] = (a - s) + b
    x[0] = s


cdef inline void c_split(double a, double* x, double* y) nogil:
    cdef double c = SPLITTER_ * a
    cdef double h = c - (c - a)
    y[0] = a - h
    x[0] = h


cdef inline void c_two_prod(double a, double b, double* x, double* y) nogil:
    cdef double p = a * b
    cdef double a1, a2, b1, b2
    c_split(a, &a1, &a2)
    c_split(b, &b1, &b2)
    y[0] = a2 * b2 - (((p - a1 * b1) - a2 * b1) - a1 * b2)
    x[0] = p


cdef inline void c_div_rem(double a, double b, double* q, double* r) nogil:
    cdef double t = a / b
    cdef double x, y
    c_two_prod(t, b, &x, &y)
    r[0] = (a - x) - y
    q[0] = t


# -- double-double -----------------------------------------------------------

cdef inline void c_add_dd_d(double ah, double al, double b,
                            double* rh, double* rl) nogil:
    cdef double th, tl
    c_two_sum(ah, b, &th, &tl)
    tl = al + tl
    c_fast_two_sum(th, tl, rh, rl)


cdef inline void c_add_dd_dd(double ah, double al, double bh, double bl,
                             double* rh, double* rl) nogil:
    cdef double sh, sl, th, tl
    c_two_sum(ah, bh, &sh, &sl)
    c_two_sum(al, bl, &th, &tl)
    sl = sl + th
    th = sh + sl
    sl = sl - (th - sh)
    tl = tl + sl
    c_fast_two_sum(th, tl, rh, rl)


cdef inline void c_prod_dd_d(double ah, double al, double b,
                             double* rh, double* rl) nogil:
    cdef double th, tl
    c_two_prod(ah, b, &th, &tl)
    tl = al * b + tl
    c_fast_two_sum(th, tl, rh, rl)


cdef inline void c_prod_dd_dd(double ah, double al, double bh, double bl,
                              double* rh, double* rl) nogil:
    cdef double th, tl
    c_two_prod(ah, bh, &th, &tl)
    tl = ah * bl + al * bh + tl
    c_fast_two_sum(th, tl, rh, rl)


cdef inline void c_div_dd_dd(double ah, double al, double bh, double bl,
                             double* rh, double* rl) nogil:
    cdef double q1, q2, q3, th, tl, xh, xl
    q1 = ah / bh
    c_prod_dd_d(bh, bl, q1, &th, &tl)
    c_add_dd_dd(ah, al, -th, -tl, &xh, &xl)
    q2 = xh / bh
    c_prod_dd_d(bh, bl, q2, &th, &tl)
    c_add_dd_dd(xh, xl, -th, -tl, &xh, &xl)
    q3 = xh / bh
    c_fast_two_sum(q1, q2, &q1, &q2)
    c_add_dd_d(q1, q2, q3, rh, rl)


cdef inline void c_div_d_d(double a, double b, double* rh, double* rl) nogil:
    cdef double q1, q2, p1, p2, s, e
    q1 = a / b
    c_two_prod(q1, b, &p1, &p2)
    c_two_sum(a, -p1, &s, &e)
    e = e - p2
    q2 = (s + e) / b
    c_fast_two_sum(q1, q2, rh, rl)


# -- Python-visible wrappers -------------------------------------------------

def two_sum(double a, double b):
    cdef double x, y
    c_two_sum(a, b, &x, &y)
    return x, y


def fast_two_sum(double a, double b):
    cdef double x, y
    c_fast_two_sum(a, b, &x, &y)
    return x, y


def split(double a):
    cdef double x, y
    c_split(a, &x, &y)
    return x, y


def two_prod(double a, double b):
    cdef double x, y
    c_two_prod(a, b, &x, &y)
    return x, y


def div_rem(double a, double b):
    cdef double x, y
    c_div_rem(a, b, &x, &y)
    return x, y


def add_dd_d(double ah, double al, double b):
    cdef double x, y
    c_add_dd_d(ah, al, b, &x, &y)
    return x, y


def add_dd_dd(double ah, double al, double bh, double bl):
    cdef double x, y
    c_add_dd_dd(ah, al, bh, bl, &x, &y)
    return x, y


def prod_dd_d(double ah, double al, double b):
    cdef double x, y
    c_prod_dd_d(ah, al, b, &x, &y)
    return x, y


def prod_dd_dd(double ah, double al, double bh, double bl):
    cdef double x, y
    c_prod_dd_dd(ah, al, bh, bl, &x, &y)
    return x, y


def div_dd_dd(double ah, double al, double bh, double bl):
    cdef double x, y
    c_div_dd_dd(ah, al, bh, bl, &x, &y)
    return x, y


def div_d_d(double a, double b):
    cdef double x, y
    c_div_d_d(a, b, &x, &y)
    return x, y


# -- table storage -------------------------------------------------------------

cdef inline int c_divisor_status(double d) nogil:
    if d == 0:
        return 1
    if fabs(d) < TINY_:
        return 2
    return 0


cdef inline bint c_finite(double x) nogil:
    return fabs(x) <= BIG_


cdef class _Plane:
    """Column-major storage: cell (m, n) at m * stride + n."""
    cdef double* v
    cdef int* s
    cdef int stride
    cdef int rows

    def __cinit__(self, int rows, int stride):
        self.rows = rows
        self.stride = stride
        self.v = <double*>malloc(rows * stride * sizeof(double))
        self.s = <int*>malloc(rows * stride * sizeof(int))
        if self.v == NULL or self.s == NULL:
            raise MemoryError()
        cdef int i
        for i in range(rows * stride):
            self.v[i] = NAN_
            self.s[i] = 0

    def __dealloc__(self):
        free(self.v)
        free(self.s)

    cdef list values(self, int N, int q):
        cdef list out = [[]]
        cdef int m, n, length
        for m in range(1, self.rows):
            length = N - 2 * m + 2 if q else N - 2 * m + 1
            out.append([self.v[m * self.stride + n] for n in range(length)])
        return out

    cdef list status(self, int N, int q):
        cdef list out = [[]]
        cdef int m, n, length
        for m in range(1, self.rows):
            length = N - 2 * m + 2 if q else N - 2 * m + 1
            out.append([self.s[m * self.stride + n] for n in range(length)])
        return out


cdef double* _to_c(list xs) except NULL:
    cdef Py_ssize_t k = len(xs)
    cdef double* out = <double*>malloc((k + 1) * sizeof(double))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(k):
        out[i] = xs[i]
    return out


# -- qd table builders -------------------------------------------------------

def qd_fill(c, int N, hook=None):
    cdef int mq = (N + 1) // 2
    cdef int me = N // 2
    cdef int stride = N + 2
    cdef _Plane Q = _Plane(mq + 1, stride)
    cdef _Plane E = _Plane(me + 1, stride)
    cdef double* cc = _to_c(list(c))
    cdef double* q = Q.v
    cdef double* e = E.v
    cdef int* sq = Q.s
    cdef int* se = E.s
    cdef list diags = []
    cdef int m, n, st, a, b
    cdef double v, prev
    try:
        for n in range(N):
            st = c_divisor_status(cc[n])
            if st:
                sq[stride + n] = st
                diags.append(("q", 1, n, st))
                continue
            v = cc[n + 1] / cc[n]
            if not c_finite(v):
                sq[stride + n] = 3
                diags.append(("q", 1, n, 3))
                continue
            q[stride + n] = v
            if hook is not None:
                hook("q", 1, n)
        for m in range(1, me + 1):
            a = m * stride
            b = (m - 1) * stride
            for n in range(N - 2 * m + 1):
                if sq[a + n + 1] or sq[a + n] or (m > 1 and se[b + n + 1]):
                    se[a + n] = 4
                    continue
                prev = e[b + n + 1] if m > 1 else 0.0
                v = q[a + n + 1] - q[a + n] + prev
                if not c_finite(v):
                    se[a + n] = 3
                    diags.append(("e", m, n, 3))
                    continue
                e[a + n] = v
                if hook is not None:
                    hook("e", m, n)
            if m + 1 > mq:
                continue
            b = (m + 1) * stride
            for n in range(N - 2 * m):
                if se[a + n + 1] or se[a + n] or sq[a + n + 1]:
                    sq[b + n] = 4
                    continue
                st = c_divisor_status(e[a + n])
                if st:
                    sq[b + n] = st
                    diags.append(("q", m + 1, n, st))
                    continue
                v = (e[a + n + 1] / e[a + n]) * q[a + n + 1]
                if not c_finite(v):
                    sq[b + n] = 3
                    diags.append(("q", m + 1, n, 3))
                    continue
                q[b + n] = v
                if hook is not None:
                    hook("q", m + 1, n)
    finally:
        free(cc)
    return (Q.values(N, 1), E.values(N, 0), Q.status(N, 1), E.status(N, 0),
            diags)


def compqd_fill(ch, cl, int N, init="real", hook=None):
    cdef int mq = (N + 1) // 2
    cdef int me = N // 2
    cdef int stride = N + 2
    cdef _Plane Q = _Plane(mq + 1, stride)
    cdef _Plane EQ = _Plane(mq + 1, stride)
    cdef _Plane E = _Plane(me + 1, stride)
    cdef _Plane EE = _Plane(me + 1, stride)
    cdef double* h = _to_c(list(ch))
    cdef double* l = _to_c(list(cl))
    cdef double* q = Q.v
    cdef double* eq = EQ.v
    cdef double* e = E.v
    cdef double* ee = EE.v
    cdef int* sq = Q.s
    cdef int* se = E.s
    cdef list diags = []
    cdef bint flt = init == "float"
    cdef int m, n, st, a, b
    cdef double x, y, r, w, lo, s, mu1, mu2, mu3, mu4, pe, pee, eps, t, d
    cdef double eh, qh, neps
    try:
        for n in range(N):
            st = c_divisor_status(h[n])
            if st:
                sq[stride + n] = st
                diags.append(("q", 1, n, st))
                continue
            if flt:
                c_div_rem(h[n + 1], h[n], &x, &r)
                w = r / h[n]
                y = -w
            else:
                c_div_dd_dd(h[n + 1], l[n + 1], h[n], l[n], &x, &lo)
                y = -lo
            if not (c_finite(x) and c_finite(y)):
                sq[stride + n] = 3
                diags.append(("q", 1, n, 3))
                continue
            q[stride + n] = x
            eq[stride + n] = y
            if hook is not None:
                hook("q", 1, n)
        for m in range(1, me + 1):
            a = m * stride
            b = (m - 1) * stride
            for n in range(N - 2 * m + 1):
                if sq[a + n + 1] or sq[a + n] or (m > 1 and se[b + n + 1]):
                    se[a + n] = 4
                    continue
                if m > 1:
                    pe = e[b + n + 1]
                    pee = ee[b + n + 1]
                else:
                    pe = 0.0
                    pee = 0.0
                c_two_sum(q[a + n + 1], -q[a + n], &s, &mu1)
                c_two_sum(s, pe, &eh, &mu2)
                eps = eq[a + n + 1] - eq[a + n] + pee - mu1 - mu2
                c_fast_two_sum(eh, -eps, &eh, &neps)
                if not (c_finite(eh) and c_finite(neps)):
                    se[a + n] = 3
                    diags.append(("e", m, n, 3))
                    continue
                e[a + n] = eh
                ee[a + n] = -neps
                if hook is not None:
                    hook("e", m, n)
            if m + 1 > mq:
                continue
            b = (m + 1) * stride
            for n in range(N - 2 * m):
                if se[a + n + 1] or se[a + n] or sq[a + n + 1]:
                    sq[b + n] = 4
                    continue
                d = e[a + n]
                st = c_divisor_status(d)
                if st:
                    sq[b + n] = st
                    diags.append(("q", m + 1, n, st))
                    continue
                c_div_rem(e[a + n + 1], d, &t, &mu3)
                c_two_prod(t, q[a + n + 1], &qh, &mu4)
                eps = (eq[a + n + 1] * e[a + n + 1] + ee[a + n + 1] * q[a + n + 1]
                       - ee[a + n] * qh - mu3 * q[a + n + 1] - mu4 * d) / d
                c_fast_two_sum(qh, -eps, &qh, &neps)
                if not (c_finite(qh) and c_finite(neps)):
                    sq[b + n] = 3
                    diags.append(("q", m + 1, n, 3))
                    continue
                q[b + n] = qh
                eq[b + n] = -neps
                if hook is not None:
                    hook("q", m + 1, n)
    finally:
        free(h)
        free(l)
    return (Q.values(N, 1), EQ.values(N, 1), E.values(N, 0), EE.values(N, 0),
            Q.status(N, 1), E.status(N, 0), diags)


def ddqd_fill(ch, cl, int N, init="real", hook=None):
    cdef int mq = (N + 1) // 2
    cdef int me = N // 2
    cdef int stride = N + 2
    cdef _Plane QH = _Plane(mq + 1, stride)
    cdef _Plane QL = _Plane(mq + 1, stride)
    cdef _Plane EH = _Plane(me + 1, stride)
    cdef _Plane EL = _Plane(me + 1, stride)
    cdef double* h = _to_c(list(ch))
    cdef double* l = _to_c(list(cl))
    cdef double* qh = QH.v
    cdef double* ql = QL.v
    cdef double* eh = EH.v
    cdef double* el = EL.v
    cdef int* sq = QH.s
    cdef int* se = EH.s
    cdef list diags = []
    cdef bint flt = init == "float"
    cdef int m, n, st, a, b
    cdef double x, y, ph, pl, rh, rl, th, tl
    try:
        for n in range(N):
            st = c_divisor_status(h[n])
            if st:
                sq[stride + n] = st
                diags.append(("q", 1, n, st))
                continue
            if flt:
                c_div_d_d(h[n + 1], h[n], &x, &y)
            else:
                c_div_dd_dd(h[n + 1], l[n + 1], h[n], l[n], &x, &y)
            if not (c_finite(x) and c_finite(y)):
                sq[stride + n] = 3
                diags.append(("q", 1, n, 3))
                continue
            qh[stride + n] = x
            ql[stride + n] = y
            if hook is not None:
                hook("q", 1, n)
        for m in range(1, me + 1):
            a = m * stride
            b = (m - 1) * stride
            for n in range(N - 2 * m + 1):
                if sq[a + n + 1] or sq[a + n] or (m > 1 and se[b + n + 1]):
                    se[a + n] = 4
                    continue
                if m > 1:
                    ph = eh[b + n + 1]
                    pl = el[b + n + 1]
                else:
                    ph = 0.0
                    pl = 0.0
                c_add_dd_dd(qh[a + n + 1], ql[a + n + 1], -qh[a + n],
                            -ql[a + n], &rh, &rl)
                c_add_dd_dd(rh, rl, ph, pl, &x, &y)
                if not (c_finite(x) and c_finite(y)):
                    se[a + n] = 3
                    diags.append(("e", m, n, 3))
                    continue
                eh[a + n] = x
                el[a + n] = y
                if hook is not None:
                    hook("e", m, n)
            if m + 1 > mq:
                continue
            b = (m + 1) * stride
            for n in range(N - 2 * m):
                if se[a + n + 1] or se[a + n] or sq[a + n + 1]:
                    sq[b + n] = 4
                    continue
                st = c_divisor_status(eh[a + n])
                if st:
                    sq[b + n] = st
                    diags.append(("q", m + 1, n, st))
                    continue
                c_div_dd_dd(eh[a + n + 1], el[a + n + 1], eh[a + n],
                            el[a + n], &th, &tl)
                c_prod_dd_dd(th, tl, qh[a + n + 1], ql[a + n + 1], &x, &y)
                if not (c_finite(x) and c_finite(y)):
                    sq[b + n] = 3
                    diags.append(("q", m + 1, n, 3))
                    continue
                qh[b + n] = x
                ql[b + n] = y
                if hook is not None:
                    hook("q", m + 1, n)
    finally:
        free(h)
        free(l)
    return (QH.values(N, 1), QL.values(N, 1), EH.values(N, 0),
            EL.values(N, 0), QH.status(N, 1), EH.status(N, 0), diags)


# -- progressive form --------------------------------------------------------

def proqd_run(b, double tol, int max_sweeps):
    cdef int k = len(b) - 1
    cdef double* bb = _to_c(list(b))
    cdef double* q = <double*>malloc((k + 2) * sizeof(double))
    cdef double* e = <double*>malloc((k + 1) * sizeof(double))
    cdef int i, m, sweeps = 0
    cdef double maxe = NAN_, d, a
    cdef int status = 2
    where = None
    try:
        for i in range(k + 2):
            q[i] = 0.0
        for i in range(k + 1):
            e[i] = 0.0
        for i in range(k + 1):
            if bb[i] == 0:
                return ([q[i] for i in range(1, k + 1)],
                        [e[i] for i in range(k + 1)], 0, NAN_, 1, ("b", i))
        q[1] = -bb[1] / bb[0]
        for m in range(1, k):
            e[m] = bb[m + 1] / bb[m]
        while sweeps < max_sweeps:
            for m in range(1, k + 1):
                q[m] = e[m] - e[m - 1] + q[m]
            maxe = 0.0
            for m in range(1, k):
                d = q[m]
                if d == 0 or fabs(d) < TINY_:
                    status = 1
                    where = ("q", m)
                    break
                e[m] = (q[m + 1] / d) * e[m]
                a = fabs(e[m])
                if a > maxe:
                    maxe = a
            if status == 1:
                break
            sweeps += 1
            if maxe <= tol:
                status = 0
                break
        return ([q[i] for i in range(1, k + 1)], [e[i] for i in range(k + 1)],
                sweeps, maxe, status, where)
    finally:
        free(bb)
        free(q)
        free(e)


def compproqd_run(bh, bl, double tol, int max_sweeps):
    cdef int k = len(bh) - 1
    cdef double* h = _to_c(list(bh))
    cdef double* l = _to_c(list(bl))
    cdef double* q = <double*>malloc((k + 2) * sizeof(double))
    cdef double* eq = <double*>malloc((k + 2) * sizeof(double))
    cdef double* e = <double*>malloc((k + 1) * sizeof(double))
    cdef double* ee = <double*>malloc((k + 1) * sizeof(double))
    cdef int i, m, sweeps = 0
    cdef double maxe = NAN_, d, x, lo, s, mu1, mu2, mu3, mu4, qh, eh, eps
    cdef double neps, t, a
    cdef int status = 2
    where = None
    try:
        for i in range(k + 2):
            q[i] = 0.0
            eq[i] = 0.0
        for i in range(k + 1):
            e[i] = 0.0
            ee[i] = 0.0
        for i in range(k + 1):
            if h[i] == 0:
                return ([q[i] for i in range(1, k + 1)],
                        [eq[i] for i in range(1, k + 1)],
                        [e[i] for i in range(k + 1)],
                        [ee[i] for i in range(k + 1)], 0, NAN_, 1, ("b", i))
        c_div_dd_dd(-h[1], -l[1], h[0], l[0], &x, &lo)
        q[1] = x
        eq[1] = -lo
        for m in range(1, k):
            c_div_dd_dd(h[m + 1], l[m + 1], h[m], l[m], &x, &lo)
            e[m] = x
            ee[m] = -lo
        while sweeps < max_sweeps:
            for m in range(1, k + 1):
                c_two_sum(e[m], -e[m - 1], &s, &mu1)
                c_two_sum(s, q[m], &qh, &mu2)
                eps = -mu1 - mu2 + ee[m] - ee[m - 1] + eq[m]
                c_fast_two_sum(qh, -eps, &qh, &neps)
                q[m] = qh
                eq[m] = -neps
            maxe = 0.0
            for m in range(1, k):
                d = q[m]
                if d == 0 or fabs(d) < TINY_:
                    status = 1
                    where = ("q", m)
                    break
                c_div_rem(q[m + 1], d, &t, &mu3)
                c_two_prod(t, e[m], &eh, &mu4)
                eps = (-(mu3 * e[m]) - mu4 * d + ee[m] * q[m + 1]
                       + eq[m + 1] * e[m] - eq[m] * eh) / d
                c_fast_two_sum(eh, -eps, &eh, &neps)
                e[m] = eh
                ee[m] = -neps
                a = fabs(eh)
                if a > maxe:
                    maxe = a
            if status == 1:
                break
            sweeps += 1
            if maxe <= tol:
                status = 0
                break
        return ([q[i] for i in range(1, k + 1)],
                [eq[i] for i in range(1, k + 1)],
                [e[i] for i in range(k + 1)], [ee[i] for i in range(k + 1)],
                sweeps, maxe, status, where)
    finally:
        free(h)
        free(l)
        free(q)
        free(eq)
        free(e)
        free(ee)
