# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a line-for-line twin in ``_pykernels.py``; the two
must agree bit for bit on the integer and compensated-sum paths. Orbit
values live in ``unsigned __int128`` and an odd step that would leave the
128-bit range is reported as overflow instead of wrapping.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, log1p, floor, fabs, sin, cos, atan2, sqrt, M_PI

cnp.import_array()

cdef extern from *:
    """
    typedef unsigned __int128 u128_t;
    static const u128_t U128_MAX_C = ~((u128_t)0);
    """
    ctypedef unsigned long long u128 "u128_t"
    u128 U128_MAX_C

ctypedef unsigned long long u64


cdef inline bint _next(u128 x, u128 mult, u128 add, u128* out) nogil:
    # returns 0 on overflow
    if (x & 1) == 0:
        out[0] = x >> 1
        return 1
    if x > (U128_MAX_C - add) / mult:
        return 0
    out[0] = mult * x + add
    return 1


cdef inline double _lin(u128 x, u128 k, u128 add) nogil:
    # k*x + add as a double, exact integer first when it fits
    if x <= (U128_MAX_C - add) / k:
        return <double>(k * x + add)
    return <double>k * <double>x + <double>add


cdef inline double _phase(u128 x, u128 k, u128 add, double logk, double logbase) nogil:
    cdef double p
    if x <= (U128_MAX_C - add) / k:
        p = (log(<double>(k * x + add)) - logk) / logbase
    else:
        p = (log(<double>x) + log1p(<double>add / (<double>k * <double>x))) / logbase
    return p - floor(p)


cdef inline double _wrap(double u) nogil:
    return u - (<double>_ceil_half(u))


cdef inline double _ceil_half(double u) nogil:
    # ceil(u - 0.5) so that the half point maps to +0.5
    cdef double v = u - 0.5
    cdef double f = floor(v)
    if f == v:
        return f
    return f + 1.0


cdef inline double _eps(u128 x, u128 y, u128 k, u128 add, double logk, double logbase,
                        double alpha, u128 branch_from) nogil:
    if branch_from != 0 and x > branch_from:
        return log1p(1.0 / _lin(x, k, add)) / logbase
    return _wrap(_phase(y, k, add, logk, logbase) - _phase(x, k, add, logk, logbase) - alpha)


cdef inline void _kadd(double* s, double* c, double v) nogil:
    cdef double y = v - c[0]
    cdef double t = s[0] + y
    c[0] = (t - s[0]) - y
    s[0] = t


def eps_block(u64 lo, u64 hi, u64 mult, u64 add, u64 k, double logk, double logbase,
              double alpha, u64 branch_from, int nbins, double binw):
    """Aggregate |eps| over the integers lo..hi inclusive."""
    cdef u64 x
    cdef u128 y
    cdef double e, ae
    cdef double s_abs = 0.0, c_abs = 0.0, s_sq = 0.0, c_sq = 0.0
    cdef double mx = -1.0, mn = 1.0
    cdef u64 argmax = 0, argmin = 0, count = 0, overflow = 0
    cdef long idx
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hist = np.zeros(nbins + 1, dtype=np.int64)
    with nogil:
        x = lo
        while x <= hi:
            if not _next(<u128>x, <u128>mult, <u128>add, &y):
                overflow += 1
            else:
                e = _eps(<u128>x, y, <u128>k, <u128>add, logk, logbase, alpha, <u128>branch_from)
                ae = fabs(e)
                count += 1
                if ae > mx:
                    mx = ae
                    argmax = x
                if ae < mn:
                    mn = ae
                    argmin = x
                _kadd(&s_abs, &c_abs, ae)
                _kadd(&s_sq, &c_sq, ae * ae)
                idx = <long>(ae / binw)
                if idx >= nbins:
                    idx = nbins
                hist[idx] += 1
            if x == hi:
                break
            x += 1
    return (count, mx, argmax, mn, argmin, s_abs, c_abs, s_sq, c_sq, hist, overflow)


def orbit_block(u64 lo, u64 hi, long cap, u64 mult, u64 add, u64 k, double logk,
                double logbase, double alpha, u64 branch_from, bint follow_cycle,
                cnp.ndarray[cnp.int64_t, ndim=1] depths):
    """Cumulative-error aggregates for every trajectory started in lo..hi."""
    cdef u64 x0
    cdef u128 x, y
    cdef long n, j, nd = depths.shape[0], dptr
    cdef double p0, pn, pn1, e, E, cE, absE, run_max, target, d
    cdef double sup_abs = -1.0, max_res = -1.0
    cdef u64 sup_x = 0, res_x = 0
    cdef long sup_n = 0
    cdef long unresolved = 0, overflow = 0
    cdef bint done, ovf, seen_one
    cdef long run_argn
    cdef cnp.ndarray[cnp.int64_t, ndim=1] steps = np.zeros(hi - lo + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dmax = np.full(nd, -1.0)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] dx = np.zeros(nd, dtype=np.uint64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cur = np.zeros(nd)
    with nogil:
        x0 = lo
        while True:
            x = x0
            p0 = _phase(x, k, add, logk, logbase)
            pn = p0
            E = 0.0
            cE = 0.0
            run_max = 0.0
            run_argn = 0
            dptr = 0
            while dptr < nd and depths[dptr] <= 0:
                cur[dptr] = 0.0
                dptr += 1
            n = 0
            ovf = False
            seen_one = (x == 1)
            done = seen_one and not follow_cycle
            while not done:
                if n >= cap:
                    break
                if not _next(x, <u128>mult, <u128>add, &y):
                    ovf = True
                    break
                e = _eps(x, y, k, add, logk, logbase, alpha, branch_from)
                _kadd(&E, &cE, e)
                n += 1
                pn1 = _phase(y, k, add, logk, logbase)
                target = p0 + n * alpha + E
                target = target - floor(target)
                d = fabs(pn1 - target)
                if 1.0 - d < d:
                    d = 1.0 - d
                if d > max_res:
                    max_res = d
                    res_x = x0
                absE = fabs(E)
                if absE > run_max:
                    run_max = absE
                    run_argn = n
                while dptr < nd and depths[dptr] <= n:
                    cur[dptr] = run_max
                    dptr += 1
                x = y
                pn = pn1
                if x == 1:
                    if seen_one or not follow_cycle:
                        done = True
                    seen_one = True
            while dptr < nd:
                cur[dptr] = run_max
                dptr += 1
            if ovf:
                overflow += 1
                steps[x0 - lo] = -2
            elif not done:
                unresolved += 1
                steps[x0 - lo] = -1
            else:
                steps[x0 - lo] = n
            if run_max > sup_abs:
                sup_abs = run_max
                sup_x = x0
                sup_n = run_argn
            for j in range(nd):
                if cur[j] > dmax[j]:
                    dmax[j] = cur[j]
                    dx[j] = x0
            if x0 == hi:
                break
            x0 += 1
    return (sup_abs, sup_x, sup_n, max_res, res_x, steps, dmax, dx, unresolved, overflow)


def stop_times(u64 lo, u64 hi, long cap):
    """Total and Terras stopping times; -1 marks cap exhaustion, -2 overflow."""
    cdef u64 x0
    cdef u128 x, y
    cdef long n, terras
    cdef bint ovf
    cdef cnp.ndarray[cnp.int64_t, ndim=1] total = np.zeros(hi - lo + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] terr = np.zeros(hi - lo + 1, dtype=np.int64)
    with nogil:
        x0 = lo
        while True:
            x = x0
            n = 0
            terras = 0 if x0 == 1 else -1
            ovf = False
            while x != 1:
                if n >= cap:
                    break
                if not _next(x, 3, 1, &y):
                    ovf = True
                    break
                x = y
                n += 1
                if terras < 0 and x < x0:
                    terras = n
            if ovf:
                total[x0 - lo] = -2
                if terras < 0:
                    terras = -2
            elif x != 1:
                total[x0 - lo] = -1
            else:
                total[x0 - lo] = n
            terr[x0 - lo] = terras
            if x0 == hi:
                break
            x0 += 1
    return total, terr


def phase_block(u64 lo, u64 hi, u64 k, u64 add, double logk, double logbase):
    cdef u64 x
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(hi - lo + 1)
    with nogil:
        x = lo
        while True:
            out[x - lo] = _phase(<u128>x, <u128>k, <u128>add, logk, logbase)
            if x == hi:
                break
            x += 1
    return out


def orbit_eps_matrix(cnp.ndarray[cnp.uint64_t, ndim=1] xs, long steps, u64 k, u64 add,
                     double logk, double logbase, double alpha, u64 branch_from):
    """eps along the first `steps` iterates of each x, plus parity words."""
    cdef long i, j, n = xs.shape[0]
    cdef u128 x, y
    cdef cnp.ndarray[cnp.float64_t, ndim=2] eps = np.zeros((n, steps))
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] words = np.zeros(n, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] bad = np.zeros(n, dtype=np.uint8)
    cdef u64 w
    with nogil:
        for i in range(n):
            x = xs[i]
            w = 0
            for j in range(steps):
                if not _next(x, 3, 1, &y):
                    bad[i] = 1
                    break
                if j < 64 and (x & 1):
                    w |= (<u64>1) << j
                eps[i, j] = _eps(x, y, k, add, logk, logbase, alpha, branch_from)
                x = y
            words[i] = w
    return eps, words, bad


def scan_cell(cnp.ndarray[cnp.uint64_t, ndim=1] xs, double logbase, double shift,
              double fixed_alpha):
    """Deviation of the classic map from a rigid rotation under frac(log_base(x + shift)).

    ``fixed_alpha`` < 0 requests the circular-mean estimate.
    """
    cdef long i, n = xs.shape[0]
    cdef u64 x, y
    cdef double p, q, dlt, ss = 0.0, cc = 0.0, ah, r, u, au
    cdef double sup = 0.0, tot = 0.0, dmin = 1.0, dmax = -1.0
    cdef double two_pi = 2.0 * M_PI
    cdef cnp.ndarray[cnp.float64_t, ndim=1] deltas = np.empty(n)
    with nogil:
        for i in range(n):
            x = xs[i]
            y = x >> 1 if (x & 1) == 0 else 3 * x + 1
            p = log(<double>x + shift) / logbase
            p = p - floor(p)
            q = log(<double>y + shift) / logbase
            q = q - floor(q)
            dlt = q - p
            dlt = dlt - floor(dlt)
            deltas[i] = dlt
            ss += sin(two_pi * dlt)
            cc += cos(two_pi * dlt)
        r = sqrt(ss * ss + cc * cc) / n
        if fixed_alpha >= 0.0:
            ah = fixed_alpha
        else:
            ah = atan2(ss, cc) / two_pi
            if ah < 0.0:
                ah += 1.0
            if ah >= 1.0:
                ah -= 1.0
        for i in range(n):
            u = _wrap(deltas[i] - ah)
            au = fabs(u)
            if au > sup:
                sup = au
            tot += au
            if u < dmin:
                dmin = u
            if u > dmax:
                dmax = u
    return (ah, r, sup, tot / n, dmin, dmax)
