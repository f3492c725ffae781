"""Compiled enumeration loops for integer-matrix cubic forms.

Everything here works in int64 and is only called by ``cubic_forms`` after it
has checked that the discriminant range keeps every intermediate well below
2**63.  Results are candidates only; the Python side re-verifies them exactly.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# relative slack used when deciding float reducedness of the covariant
EPS = 1e-9


@njit(cache=True)
def _isqrt(n):
    if n < 0:
        return -1
    s = np.int64(math.sqrt(float(n)))
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


@njit(cache=True)
def _disc(a, b, c, d):
    return a * a * d * d + 4 * a * c * c * c + 4 * b * b * b * d - 3 * b * b * c * c - 6 * a * b * c * d


@njit(cache=True)
def _polish(a, b, c, d, t):
    # Newton on a t^3 + 3b t^2 + 3c t + d
    for _ in range(4):
        fv = ((a * t + 3.0 * b) * t + 3.0 * c) * t + d
        fd = (3.0 * a * t + 6.0 * b) * t + 3.0 * c
        if fd == 0.0:
            break
        step = fv / fd
        t -= step
        if abs(step) <= 1e-16 * (1.0 + abs(t)):
            break
    return t


@njit(cache=True)
def _real_roots(a, b, c, d):
    """Real roots of a t^3 + 3b t^2 + 3c t + d (a != 0) as a length-3 array, count."""
    out = np.zeros(3)
    af, bf, cf, df = float(a), float(b), float(c), float(d)
    shift = bf / af
    p = 3.0 * (af * cf - bf * bf) / (af * af)
    q = (2.0 * bf * bf * bf - 3.0 * af * bf * cf + af * af * df) / (af * af * af)
    delta = q * q / 4.0 + p * p * p / 27.0
    if delta > 0.0:
        sd = math.sqrt(delta)
        u = -q / 2.0 + sd
        v = -q / 2.0 - sd
        s = math.copysign(abs(u) ** (1.0 / 3.0), u) + math.copysign(abs(v) ** (1.0 / 3.0), v)
        out[0] = _polish(af, bf, cf, df, s - shift)
        return out, 1
    if p == 0.0:
        out[0] = -shift
        return out, 1
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    if arg > 1.0:
        arg = 1.0
    if arg < -1.0:
        arg = -1.0
    th = math.acos(arg) / 3.0
    for k in range(3):
        s = m * math.cos(th - 2.0 * math.pi * k / 3.0)
        out[k] = _polish(af, bf, cf, df, s - shift)
    return out, 3


@njit(cache=True)
def _has_rational_root(a, b, c, d):
    if a == 0:
        return True
    roots, n = _real_roots(a, b, c, d)
    aa = abs(a)
    for i in range(n):
        r = roots[i]
        for y in range(1, aa + 1):
            if aa % y != 0:
                continue
            x = np.int64(round(r * y))
            for dx in range(-1, 2):
                xx = x + dx
                if a * xx * xx * xx + 3 * b * xx * xx * y + 3 * c * xx * y * y + d * y * y * y == 0:
                    return True
    return False


@njit(cache=True)
def _phi(a, b, c, d):
    """Positive definite covariant quadratic of a form with one real root."""
    if a == 0:
        r = 3.0 * b
        return r * 3.0 * b, r * 3.0 * c, r * float(d)
    roots, n = _real_roots(a, b, c, d)
    th = roots[0]
    beta = 3.0 * b + a * th
    gam = 3.0 * c + beta * th
    res = a * th * th + beta * th + gam
    return res * a, res * beta, res * gam


@njit(cache=True)
def _phi_status(a, b, c, d):
    """0: not reduced, 1: reduced with margin, 2: reduced up to float slack."""
    P, Q, R = _phi(a, b, c, d)
    if abs(Q) > P * (1.0 + EPS) or P > R * (1.0 + EPS):
        return 0
    if abs(Q) < P * (1.0 - EPS) and P < R * (1.0 - EPS):
        return 1
    return 2


@njit(cache=True)
def _pos_bounds(D):
    """Coefficient box containing every reduced form with 0 < disc <= D and a >= 0."""
    pmax = 3.0 * math.sqrt(D)
    amax = np.int64(2.0 * D ** 0.25) + 1
    bmax = np.int64(2.0 / 3.0 * math.sqrt(pmax)) + 1
    return pmax, amax, bmax


@njit(cache=True)
def _c_bound(a, D, pmax):
    pmin = (27.0 * a * a * D / 4.0) ** (1.0 / 3.0)
    if pmin > pmax * (1.0 + 1e-9) + 1.0:
        return -1
    rmax = max((27.0 * D + pmin * pmin) / (4.0 * pmin), pmax)
    return np.int64((math.sqrt(2.0 * rmax) + math.sqrt(2.0 * pmax)) / 3.0) + 1


@njit(cache=True)
def pos_disc_forms(D):
    """All (a,b,c,d) of disc exactly D > 0 whose covariant is (nearly) reduced."""
    pmax, amax, bmax = _pos_bounds(D)
    buf = np.zeros((64, 5), dtype=np.int64)
    cnt = 0
    for a in range(0, amax + 1):
        if a > 0:
            cmax = _c_bound(a, D, pmax)
            if cmax < 0:
                continue
        for b in range(-bmax, bmax + 1):
            if a == 0:
                if b <= 0:
                    continue
                cmax = b
            for c in range(-cmax, cmax + 1):
                d0 = np.int64(0)
                d1 = np.int64(0)
                nd = 0
                if a == 0:
                    num = D + 3 * b * b * c * c
                    den = 4 * b * b * b
                    if num % den == 0:
                        d0 = num // den
                        nd = 1
                else:
                    A = a * a
                    B = 4 * b * b * b - 6 * a * b * c
                    C = 4 * a * c * c * c - 3 * b * b * c * c - D
                    dd = B * B - 4 * A * C
                    s = _isqrt(dd)
                    if s < 0 or s * s != dd:
                        continue
                    if (s - B) % (2 * A) == 0:
                        d0 = (s - B) // (2 * A)
                        nd = 1
                    if s > 0 and (-s - B) % (2 * A) == 0:
                        if nd == 0:
                            d0 = (-s - B) // (2 * A)
                        else:
                            d1 = (-s - B) // (2 * A)
                        nd += 1
                for i in range(nd):
                    d = d0 if i == 0 else d1
                    if _disc(a, b, c, d) != D:
                        continue
                    st = _phi_status(a, b, c, d)
                    if st == 0:
                        continue
                    if cnt == buf.shape[0]:
                        nb = np.zeros((2 * cnt, 5), dtype=np.int64)
                        nb[:cnt] = buf
                        buf = nb
                    buf[cnt, 0] = a
                    buf[cnt, 1] = b
                    buf[cnt, 2] = c
                    buf[cnt, 3] = d
                    buf[cnt, 4] = st
                    cnt += 1
    return buf[:cnt]


@njit(cache=True)
def _forms_with_hessian(P, Q, R, N, buf, cnt, tag):
    """Append every f with -hessian(f) == (P,Q,R), 4PR - Q^2 = N."""
    amax = _isqrt(4 * P * P * P // N)
    for a in range(-amax, amax + 1):
        t = 4 * P * P * P - N * a * a
        if t < 0:
            continue
        s = _isqrt(t)
        if s * s != t:
            continue
        for sg in (1, -1):
            num = Q * a + sg * s
            if num % (2 * P) == 0:
                b = num // (2 * P)
                x = b * Q - a * R
                if x % P == 0:
                    c = x // P
                    y = c * Q - b * R
                    if y % P == 0:
                        d = y // P
                        if b * b - a * c == P and b * c - a * d == Q and c * c - b * d == R:
                            if cnt == buf.shape[0]:
                                nb = np.zeros((2 * cnt, 5), dtype=np.int64)
                                nb[:cnt] = buf
                                buf = nb
                            buf[cnt, 0] = a
                            buf[cnt, 1] = b
                            buf[cnt, 2] = c
                            buf[cnt, 3] = d
                            buf[cnt, 4] = tag
                            cnt += 1
            if s == 0:
                break
    return buf, cnt


@njit(cache=True)
def neg_disc_forms(N):
    """All forms of disc -N (N > 0) whose Hessian is reduced; tag 1 = strictly."""
    buf = np.zeros((64, 5), dtype=np.int64)
    cnt = 0
    pmax = _isqrt(N // 3)
    for P in range(1, pmax + 1):
        for Q in range(-P, P + 1):
            t = Q * Q + N
            if t % (4 * P) != 0:
                continue
            R = t // (4 * P)
            if R < P:
                continue
            tag = 1 if (abs(Q) < P and P < R) else 2
            buf, cnt = _forms_with_hessian(P, Q, R, N, buf, cnt, tag)
    return buf[:cnt]


@njit(cache=True)
def count_neg(X, irreducible_only):
    """Classes with -X <= disc < 0: (strict count, boundary forms for exact dedup)."""
    strict = 0
    buf = np.zeros((64, 5), dtype=np.int64)
    cnt = 0
    tmp = np.zeros((16, 5), dtype=np.int64)
    pmax = _isqrt(X // 3)
    for P in range(1, pmax + 1):
        for Q in range(-P, P + 1):
            rmin = P
            rmax = (X + Q * Q) // (4 * P)
            for R in range(rmin, rmax + 1):
                N = 4 * P * R - Q * Q
                if N <= 0 or N > X:
                    continue
                boundary = abs(Q) == P or P == R
                tmp, k = _forms_with_hessian(P, Q, R, N, tmp, 0, 0)
                for i in range(k):
                    a, b, c, d = tmp[i, 0], tmp[i, 1], tmp[i, 2], tmp[i, 3]
                    if a < 0 or (a == 0 and b <= 0):
                        continue
                    if irreducible_only and _has_rational_root(a, b, c, d):
                        continue
                    if boundary:
                        if cnt == buf.shape[0]:
                            nb = np.zeros((2 * cnt, 5), dtype=np.int64)
                            nb[:cnt] = buf
                            buf = nb
                        buf[cnt, 0] = a
                        buf[cnt, 1] = b
                        buf[cnt, 2] = c
                        buf[cnt, 3] = d
                        cnt += 1
                    else:
                        strict += 1
    return strict, buf[:cnt]


@njit(cache=True)
def count_pos(X, irreducible_only):
    """Classes with 0 < disc <= X: (strict count, boundary forms for exact dedup)."""
    strict = 0
    buf = np.zeros((64, 5), dtype=np.int64)
    cnt = 0
    pmax, amax, bmax = _pos_bounds(X)
    for a in range(0, amax + 1):
        if a > 0:
            cmax = _c_bound(a, X, pmax)
            if cmax < 0:
                continue
        for b in range(-bmax, bmax + 1):
            if a == 0:
                if b <= 0:
                    continue
                cmax = b
            for c in range(-cmax, cmax + 1):
                if a == 0:
                    # disc = 4 b^3 d - 3 b^2 c^2, linear in d
                    den = 4 * b * b * b
                    lo = (3 * b * b * c * c) // den - 1
                    hi = (X + 3 * b * b * c * c) // den + 1
                else:
                    A = a * a
                    B = 4 * b * b * b - 6 * a * b * c
                    C = 4 * a * c * c * c - 3 * b * b * c * c
                    dd = B * B - 4 * A * (C - X)
                    if dd < 0:
                        continue
                    sq = math.sqrt(float(dd))
                    lo = np.int64(math.floor((-B - sq) / (2.0 * A))) - 1
                    hi = np.int64(math.ceil((-B + sq) / (2.0 * A))) + 1
                for d in range(lo, hi + 1):
                    D = _disc(a, b, c, d)
                    if D <= 0 or D > X:
                        continue
                    st = _phi_status(a, b, c, d)
                    if st == 0:
                        continue
                    if irreducible_only and _has_rational_root(a, b, c, d):
                        continue
                    if st == 1:
                        strict += 1
                    else:
                        if cnt == buf.shape[0]:
                            nb = np.zeros((2 * cnt, 5), dtype=np.int64)
                            nb[:cnt] = buf
                            buf = nb
                        buf[cnt, 0] = a
                        buf[cnt, 1] = b
                        buf[cnt, 2] = c
                        buf[cnt, 3] = d
                        cnt += 1
    return strict, buf[:cnt]
