"""Pure-Python numeric kernels.

Reference implementation of the hot loops; ``_ckernels.pyx`` mirrors it
operation for operation so both backends return bit-identical floats (both
call the platform libm for ``pow``/``exp``/``log1p``).

Families are passed as small integer codes with a flat 4-tuple of parameters:

    CLASSICAL      (r, -, -, -)                U = C * (1 + r) ** -t
    HYPERBOLIC     (k, -, -, -)                U = C / (1 + k t)
    CAPITAL_AWARE  (delta0, beta, kappa, lam)  U = C * exp(-t (delta0 + beta log1p(|C|/kappa) + lam [C<0]))
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

CLASSICAL = 0
HYPERBOLIC = 1
CAPITAL_AWARE = 2

BACKEND = "python"


def utility(family: int, p0: float, p1: float, p2: float, p3: float, t: float, c: float) -> float:
    if family == CLASSICAL:
        return c * (1.0 + p0) ** (-t)
    if family == HYPERBOLIC:
        return c / (1.0 + p0 * t)
    rate = p0 + p1 * math.log1p(abs(c) / p2)
    if c < 0.0:
        rate += p3
    return c * math.exp(-t * rate)


def solve_increasing(
    f: Callable[[float], float], target: float, tol: float, max_iter: int, f0: float = 0.0
) -> tuple[float, float, int]:
    """Solve ``f(x) == target`` for a strictly increasing ``f`` with ``f(0) == f0``.

    The bracket starts at ``[0, w]`` (or ``[-w, 0]``, whichever side of 0 the
    target lies on relative to ``f0``) with ``w = max(1, |target|)`` and doubles
    until it straddles the target; bisection then runs until the residual
    ``|f(x) - target|`` is at most ``tol``.

    Returns ``(x, residual, evaluations)``. A negative evaluation count means
    the budget ran out (or the bracket stopped shrinking) before ``tol`` was met;
    ``x`` is then the last iterate.
    """
    if target == f0:
        return 0.0, 0.0, 0
    sign = 1.0 if target > f0 else -1.0
    lo = 0.0
    hi = sign * max(1.0, abs(target))
    n = 0
    while True:
        r = f(hi) - target
        n += 1
        if abs(r) <= tol:
            return hi, abs(r), n
        if r * sign > 0.0:
            break
        if n >= max_iter:
            return hi, abs(r), -n
        lo = hi
        hi = hi * 2.0
    x = hi
    res = abs(r)
    while n < max_iter:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        r = f(mid) - target
        n += 1
        x = mid
        res = abs(r)
        if res <= tol:
            return mid, res, n
        if r * sign < 0.0:
            lo = mid
        else:
            hi = mid
    return x, res, -n


def invert(
    family: int, p0: float, p1: float, p2: float, p3: float,
    t: float, target: float, tol: float, max_iter: int,
) -> tuple[float, float, int]:
    return solve_increasing(
        lambda x: utility(family, p0, p1, p2, p3, t, x), target, tol, max_iter
    )


def future_value(
    family: int, p0: float, p1: float, p2: float, p3: float,
    t: float, c: float, tol: float, max_iter: int,
) -> tuple[float, float, int]:
    """Capital-inverse of the utility at fixed ``t``; same return triple as :func:`invert`."""
    if t == 0.0:
        return c, 0.0, 0
    if family == CLASSICAL:
        x = c / (1.0 + p0) ** (-t)
    elif family == HYPERBOLIC:
        x = c * (1.0 + p0 * t)
    else:
        return invert(family, p0, p1, p2, p3, t, c, tol, max_iter)
    res = abs(utility(family, p0, p1, p2, p3, t, x) - c)
    if res <= tol:
        return x, res, 0
    return invert(family, p0, p1, p2, p3, t, c, tol, max_iter)


def utility_many(family: int, params, ts, cs) -> np.ndarray:
    p0, p1, p2, p3 = params
    out = np.empty(len(ts))
    for i in range(len(ts)):
        out[i] = utility(family, p0, p1, p2, p3, float(ts[i]), float(cs[i]))
    return out


def future_value_many(family: int, params, ts, cs, rel_tol: float, max_iter: int):
    """Vectorised :func:`future_value`.

    Tolerance per element is ``rel_tol * max(1, |c|)``. Returns
    ``(values, residuals, ok)`` arrays.
    """
    p0, p1, p2, p3 = params
    n = len(ts)
    xs = np.empty(n)
    rs = np.empty(n)
    ok = np.empty(n, dtype=bool)
    for i in range(n):
        c = float(cs[i])
        x, r, it = future_value(
            family, p0, p1, p2, p3, float(ts[i]), c, rel_tol * max(1.0, abs(c)), max_iter
        )
        xs[i] = x
        rs[i] = r
        ok[i] = it >= 0
    return xs, rs, ok
