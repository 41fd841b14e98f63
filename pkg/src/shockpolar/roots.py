"""Scalar bracketing and bisection helpers."""

from __future__ import annotations

import math


def expand_bracket(f, start, factor, limit):
    """Grow ``x_k = start * factor**k`` until ``f`` changes sign relative to ``f(start)``.

    Returns ``(lo, hi)`` with the sign change between them, or ``None`` if
    ``limit`` is reached first (``limit`` itself is tried last when finite).
    """
    f0 = f(start)
    lo = start
    while True:
        x = lo * factor
        if x >= limit:
            if math.isfinite(limit) and limit > lo and (f(limit) > 0) != (f0 > 0):
                return lo, limit
            return None
        if (f(x) > 0) != (f0 > 0):
            return lo, x
        lo = x


def bisect_bracket(f, lo, hi, rtol=0.0, maxiter=200):
    """Bisect a sign change of ``f`` on ``[lo, hi]``.

    Unlike a midpoint-returning root finder this keeps both ends: the result
    ``(a, b)`` satisfies ``sign f(a) == sign f(lo)`` and
    ``sign f(b) == sign f(hi)``, which lets callers pick the side they need.
    With ``rtol = 0`` iteration stops when the interval no longer shrinks in
    floating point.
    """
    flo = f(lo) > 0
    if (f(hi) > 0) == flo:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    for _ in range(maxiter):
        m = 0.5 * (a + b)
        if m <= min(a, b) or m >= max(a, b) or abs(b - a) <= rtol * abs(m):
            break
        if (f(m) > 0) == flo:
            a = m
        else:
            b = m
    return a, b
