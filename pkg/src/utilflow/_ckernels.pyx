# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; drop-in twin of ``utilflow._pykernels``."""

import numpy as np

from libc.math cimport exp, fabs, log1p, pow

cdef enum:
    CLASSICAL_CODE = 0
    HYPERBOLIC_CODE = 1

CLASSICAL = 0
HYPERBOLIC = 1
CAPITAL_AWARE = 2

BACKEND = "cython"


cdef inline double _utility(int family, double p0, double p1, double p2, double p3,
                            double t, double c) noexcept nogil:
    cdef double rate
    if family == CLASSICAL_CODE:
        return c * pow(1.0 + p0, -t)
    if family == HYPERBOLIC_CODE:
        return c / (1.0 + p0 * t)
    rate = p0 + p1 * log1p(fabs(c) / p2)
    if c < 0.0:
        rate += p3
    return c * exp(-t * rate)


cdef int _invert(int family, double p0, double p1, double p2, double p3,
                 double t, double target, double tol, int max_iter,
                 double* x_out, double* res_out) noexcept nogil:
    # Same bracketing/bisection sequence as _pykernels.solve_increasing.
    cdef double sign, lo, hi, mid, r, x, res
    cdef int n = 0
    if target == 0.0:
        x_out[0] = 0.0
        res_out[0] = 0.0
        return 0
    sign = 1.0 if target > 0.0 else -1.0
    lo = 0.0
    hi = sign * (1.0 if fabs(target) < 1.0 else fabs(target))
    while True:
        r = _utility(family, p0, p1, p2, p3, t, hi) - target
        n += 1
        if fabs(r) <= tol:
            x_out[0] = hi
            res_out[0] = fabs(r)
            return n
        if r * sign > 0.0:
            break
        if n >= max_iter:
            x_out[0] = hi
            res_out[0] = fabs(r)
            return -n
        lo = hi
        hi = hi * 2.0
    x = hi
    res = fabs(r)
    while n < max_iter:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        r = _utility(family, p0, p1, p2, p3, t, mid) - target
        n += 1
        x = mid
        res = fabs(r)
        if res <= tol:
            x_out[0] = mid
            res_out[0] = res
            return n
        if r * sign < 0.0:
            lo = mid
        else:
            hi = mid
    x_out[0] = x
    res_out[0] = res
    return -n


cdef int _future_value(int family, double p0, double p1, double p2, double p3,
                       double t, double c, double tol, int max_iter,
                       double* x_out, double* res_out) noexcept nogil:
    cdef double x, res
    if t == 0.0:
        x_out[0] = c
        res_out[0] = 0.0
        return 0
    if family == CLASSICAL_CODE:
        x = c / pow(1.0 + p0, -t)
    elif family == HYPERBOLIC_CODE:
        x = c * (1.0 + p0 * t)
    else:
        return _invert(family, p0, p1, p2, p3, t, c, tol, max_iter, x_out, res_out)
    res = fabs(_utility(family, p0, p1, p2, p3, t, x) - c)
    if res <= tol:
        x_out[0] = x
        res_out[0] = res
        return 0
    return _invert(family, p0, p1, p2, p3, t, c, tol, max_iter, x_out, res_out)


def utility(int family, double p0, double p1, double p2, double p3, double t, double c):
    return _utility(family, p0, p1, p2, p3, t, c)


def invert(int family, double p0, double p1, double p2, double p3,
           double t, double target, double tol, int max_iter):
    cdef double x, res
    cdef int n = _invert(family, p0, p1, p2, p3, t, target, tol, max_iter, &x, &res)
    return x, res, n


def future_value(int family, double p0, double p1, double p2, double p3,
                 double t, double c, double tol, int max_iter):
    cdef double x, res
    cdef int n = _future_value(family, p0, p1, p2, p3, t, c, tol, max_iter, &x, &res)
    return x, res, n


def utility_many(int family, params, ts, cs):
    cdef double p0, p1, p2, p3
    p0, p1, p2, p3 = params
    cdef const double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(cs, dtype=np.float64)
    cdef Py_ssize_t i, n = tv.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _utility(family, p0, p1, p2, p3, tv[i], cv[i])
    return out


def future_value_many(int family, params, ts, cs, double rel_tol, int max_iter):
    cdef double p0, p1, p2, p3, c
    p0, p1, p2, p3 = params
    cdef const double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(cs, dtype=np.float64)
    cdef Py_ssize_t i, n = tv.shape[0]
    xs = np.empty(n)
    rs = np.empty(n)
    ok = np.empty(n, dtype=np.uint8)
    cdef double[::1] xv = xs
    cdef double[::1] rv = rs
    cdef unsigned char[::1] okv = ok
    cdef int it
    with nogil:
        for i in range(n):
            c = cv[i]
            it = _future_value(family, p0, p1, p2, p3, tv[i], c,
                               rel_tol * (1.0 if fabs(c) < 1.0 else fabs(c)),
                               max_iter, &xv[i], &rv[i])
            okv[i] = 1 if it >= 0 else 0
    return xs, rs, ok.astype(bool)
