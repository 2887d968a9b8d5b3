"""Bisection on monotone scalar functions.

The solvers in this package only ever bracket a root between a point known
to be above a threshold and one known to be below it, so plain bisection is
sufficient and keeps every run bit-reproducible.
"""

from __future__ import annotations

from typing import Callable

DEFAULT_TOL = 1e-10
MAX_ITER = 200


def bisect_decreasing(f: Callable[[float], float], lo: float, hi: float,
                      tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> float:
    """Root of ``f`` on ``[lo, hi]`` assuming ``f(lo) >= 0 >= f(hi)``.

    ``f`` must cross zero once on the bracket.  Returns ``hi`` when ``f``
    never goes negative (the root sits on the bracket boundary, e.g. the
    zero-bandwidth degenerate case).
    """
    if f(hi) >= 0.0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def bisect_increasing(f: Callable[[float], float], lo: float, hi: float,
                      tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> float:
    """Root of ``f`` on ``[lo, hi]`` assuming ``f(lo) <= 0 <= f(hi)``.

    Mirror of :func:`bisect_decreasing`; returns ``lo`` when ``f`` never
    goes negative.
    """
    if f(lo) >= 0.0:
        return lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)
