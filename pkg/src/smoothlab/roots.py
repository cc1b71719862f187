"""Bracketed bisection and golden-section search."""

from __future__ import annotations

import math
from typing import Callable

from .errors import NumericalError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect(f: Callable[[float], float], lo: float, hi: float, x_tol: float,
           max_iter: int = 200, f_lo: float | None = None,
           f_hi: float | None = None) -> float:
    """Root of ``f`` in [lo, hi], given that f changes sign across the bracket.

    Returns the midpoint of the final bracket, whose width is below
    ``2 * x_tol``.
    """
    f_lo = f(lo) if f_lo is None else f_lo
    f_hi = f(hi) if f_hi is None else f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NumericalError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        if hi - lo <= 2.0 * x_tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise NumericalError(f"bisection did not reach tolerance in {max_iter} steps",
                         estimate=0.5 * (lo + hi), error_bound=0.5 * (hi - lo))


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               x_tol: float = 1e-4, max_iter: int = 200) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= x_tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)
