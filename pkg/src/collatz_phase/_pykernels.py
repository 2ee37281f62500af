"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

The operation order follows the C code exactly so both backends produce the
same bits on the eps, orbit and stopping-time paths. ``scan_cell`` is
vectorised with numpy and agrees with the compiled version to rounding only.
"""
from __future__ import annotations

import math

import numpy as np

U128_MAX = (1 << 128) - 1

_log = math.log
_log1p = math.log1p
_floor = math.floor


def _next(x: int, mult: int, add: int) -> int | None:
    if x & 1 == 0:
        return x >> 1
    if x > (U128_MAX - add) // mult:
        return None
    return mult * x + add


def _lin(x: int, k: int, add: int) -> float:
    if x <= (U128_MAX - add) // k:
        return float(k * x + add)
    return float(k) * float(x) + float(add)


def _phase(x: int, k: int, add: int, logk: float, logbase: float) -> float:
    if x <= (U128_MAX - add) // k:
        p = (_log(float(k * x + add)) - logk) / logbase
    else:
        p = (_log(float(x)) + _log1p(float(add) / (float(k) * float(x)))) / logbase
    return p - _floor(p)


def _wrap(u: float) -> float:
    v = u - 0.5
    f = _floor(v)
    c = f if f == v else f + 1
    return u - float(c)


def _eps(x, y, k, add, logk, logbase, alpha, branch_from):
    if branch_from != 0 and x > branch_from:
        return _log1p(1.0 / _lin(x, k, add)) / logbase
    return _wrap(_phase(y, k, add, logk, logbase) - _phase(x, k, add, logk, logbase) - alpha)


def eps_block(lo, hi, mult, add, k, logk, logbase, alpha, branch_from, nbins, binw):
    s_abs = c_abs = s_sq = c_sq = 0.0
    mx, mn = -1.0, 1.0
    argmax = argmin = count = overflow = 0
    hist = [0] * (nbins + 1)
    for x in range(lo, hi + 1):
        y = _next(x, mult, add)
        if y is None:
            overflow += 1
            continue
        ae = abs(_eps(x, y, k, add, logk, logbase, alpha, branch_from))
        count += 1
        if ae > mx:
            mx, argmax = ae, x
        if ae < mn:
            mn, argmin = ae, x
        t = ae - c_abs
        s = s_abs + t
        c_abs = (s - s_abs) - t
        s_abs = s
        sq = ae * ae
        t = sq - c_sq
        s = s_sq + t
        c_sq = (s - s_sq) - t
        s_sq = s
        idx = int(ae / binw)
        hist[min(idx, nbins)] += 1
    return (count, mx, argmax, mn, argmin, s_abs, c_abs, s_sq, c_sq,
            np.asarray(hist, dtype=np.int64), overflow)


def orbit_block(lo, hi, cap, mult, add, k, logk, logbase, alpha, branch_from,
                follow_cycle, depths):
    depths = [int(d) for d in depths]
    nd = len(depths)
    sup_abs, max_res = -1.0, -1.0
    sup_x = res_x = sup_n = 0
    unresolved = overflow = 0
    steps = np.zeros(hi - lo + 1, dtype=np.int64)
    dmax = [-1.0] * nd
    dx = [0] * nd
    for x0 in range(lo, hi + 1):
        x = x0
        p0 = _phase(x, k, add, logk, logbase)
        E = cE = 0.0
        run_max, run_argn = 0.0, 0
        cur = [0.0] * nd
        dptr = 0
        while dptr < nd and depths[dptr] <= 0:
            dptr += 1
        n = 0
        ovf = False
        seen_one = x == 1
        done = seen_one and not follow_cycle
        while not done:
            if n >= cap:
                break
            y = _next(x, mult, add)
            if y is None:
                ovf = True
                break
            e = _eps(x, y, k, add, logk, logbase, alpha, branch_from)
            t = e - cE
            s = E + t
            cE = (s - E) - t
            E = s
            n += 1
            pn1 = _phase(y, k, add, logk, logbase)
            target = p0 + n * alpha + E
            target = target - _floor(target)
            d = abs(pn1 - target)
            if 1.0 - d < d:
                d = 1.0 - d
            if d > max_res:
                max_res, res_x = d, x0
            absE = abs(E)
            if absE > run_max:
                run_max, run_argn = absE, n
            while dptr < nd and depths[dptr] <= n:
                cur[dptr] = run_max
                dptr += 1
            x = y
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
            sup_abs, sup_x, sup_n = run_max, x0, run_argn
        for j in range(nd):
            if cur[j] > dmax[j]:
                dmax[j], dx[j] = cur[j], x0
    return (sup_abs, sup_x, sup_n, max_res, res_x, steps,
            np.asarray(dmax, dtype=np.float64), np.asarray(dx, dtype=np.uint64),
            unresolved, overflow)


def stop_times(lo, hi, cap):
    # Memoised on values already resolved inside [lo, x); the result is
    # identical to direct iteration because the map is deterministic.
    size = hi - lo + 1
    total = [0] * size
    terr = [0] * size
    for x0 in range(lo, hi + 1):
        if x0 == 1:
            continue
        x, n, terras = x0, 0, -1
        result = None
        while x != 1:
            if n >= cap:
                result = -1
                break
            if x & 1:
                if x > (U128_MAX - 1) // 3:
                    result = -2
                    break
                x = 3 * x + 1
            else:
                x >>= 1
            n += 1
            if terras < 0 and x < x0:
                terras = n
                if x >= lo:
                    prev = total[x - lo]
                    if prev >= 0:
                        result = n + prev if n + prev <= cap else -1
                        break
        if result is None:
            result = n
        if result == -2 and terras < 0:
            terras = -2
        total[x0 - lo] = result
        terr[x0 - lo] = terras
    return np.asarray(total, dtype=np.int64), np.asarray(terr, dtype=np.int64)


def phase_block(lo, hi, k, add, logk, logbase):
    return np.asarray([_phase(x, k, add, logk, logbase) for x in range(lo, hi + 1)],
                      dtype=np.float64)


def orbit_eps_matrix(xs, steps, k, add, logk, logbase, alpha, branch_from):
    n = len(xs)
    eps = np.zeros((n, steps))
    words = np.zeros(n, dtype=np.uint64)
    bad = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        x = int(xs[i])
        w = 0
        row = eps[i]
        for j in range(steps):
            y = _next(x, 3, 1)
            if y is None:
                bad[i] = 1
                break
            if j < 64 and x & 1:
                w |= 1 << j
            row[j] = _eps(x, y, k, add, logk, logbase, alpha, branch_from)
            x = y
        words[i] = w
    return eps, words, bad


def scan_cell(xs, logbase, shift, fixed_alpha):
    xs = np.asarray(xs, dtype=np.uint64)
    ys = np.where(xs % 2 == 0, xs // 2, 3 * xs + 1)
    p = np.log(xs.astype(np.float64) + shift) / logbase
    p -= np.floor(p)
    q = np.log(ys.astype(np.float64) + shift) / logbase
    q -= np.floor(q)
    d = q - p
    d -= np.floor(d)
    ang = 2.0 * math.pi * d
    ss = float(np.sin(ang).sum())
    cc = float(np.cos(ang).sum())
    r = math.sqrt(ss * ss + cc * cc) / len(xs)
    if fixed_alpha >= 0.0:
        ah = fixed_alpha
    else:
        ah = math.atan2(ss, cc) / (2.0 * math.pi)
        if ah < 0.0:
            ah += 1.0
        if ah >= 1.0:
            ah -= 1.0
    u = d - ah
    u = u - np.ceil(u - 0.5)
    au = np.abs(u)
    return (ah, r, float(au.max()), float(au.sum()) / len(xs), float(u.min()), float(u.max()))
