"""Locating smoothed decision boundaries.

The smoothed class-1 region under the 1/c threshold is {x : f_sigma(x) >= 1/c}.
For a ball its extent along the axis is R_sigma; for a cone it is the largest
axis coordinate still inside, the projection onto v = e_d. Both are found by
bisection on monotone axis probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .curves import CurveTable
from .errors import DomainError, NumericalError
from .roots import bisect
from .smoothprob import (DEFAULT_QUADRATURE, QuadratureSettings, ball_axis_prob,
                         ball_origin_prob, cone_axis_prob)
from .specfn import reg_lower_gamma

# marker for a smoothed region that has become empty
VANISHED = None


@dataclass(frozen=True)
class RootSettings:
    x_tol: float = 1e-6
    max_iter: int = 200
    bracket_growth: float = 2.0

    def __post_init__(self):
        if not self.x_tol > 0:
            raise DomainError("x_tol must be positive")
        if not self.bracket_growth > 1:
            raise DomainError("bracket_growth must exceed 1")


DEFAULT_ROOTS = RootSettings()


def _check_c(c: int) -> int:
    if int(c) != c or c < 2:
        raise DomainError("c must be an integer >= 2")
    return int(c)


def smoothed_ball_radius(R: float, d: int, c: int, sigma: float,
                         settings: RootSettings = DEFAULT_ROOTS,
                         q: QuadratureSettings = DEFAULT_QUADRATURE):
    """Axis extent R_sigma of the smoothed ball, or VANISHED."""
    c = _check_c(c)
    target = 1.0 / c
    if ball_origin_prob(R, d, sigma) < target:
        return VANISHED

    def g(a):
        return ball_axis_prob(R, d, sigma, a, q) - target

    g_lo = ball_origin_prob(R, d, sigma) - target
    if g_lo == 0.0:
        return 0.0
    hi = R
    g_hi = g(hi)
    for _ in range(settings.max_iter):
        if g_hi < 0:
            break
        hi *= settings.bracket_growth
        g_hi = g(hi)
    else:
        raise NumericalError("could not bracket the smoothed ball radius")
    return bisect(g, 0.0, hi, settings.x_tol, settings.max_iter, f_lo=g_lo, f_hi=g_hi)


def vanish_sigma(R: float, d: int, c: int, settings: RootSettings = DEFAULT_ROOTS) -> float:
    """Smoothing factor at which the origin probability of the ball hits 1/c."""
    if not R > 0:
        raise DomainError("R must be positive")
    if int(d) != d or d < 1:
        raise DomainError("d must be a positive integer")
    c = _check_c(c)
    target = 1.0 / c
    s = 0.5 * d

    def g(sig):
        return reg_lower_gamma(s, R * R / (2.0 * sig * sig)) - target

    hi = R
    while g(hi) > 0:
        hi *= settings.bracket_growth
    lo = hi
    while g(lo) <= 0:
        lo /= settings.bracket_growth
    # relative tolerance keeps small radii meaningful
    tol = min(settings.x_tol, 1e-9 * hi)
    return bisect(g, lo, hi, tol, settings.max_iter + 200)


def shrink_rate_curve(R: float, d: int, c: int, sigma_grid: Sequence[float],
                      settings: RootSettings = DEFAULT_ROOTS,
                      q: QuadratureSettings = DEFAULT_QUADRATURE) -> CurveTable:
    """R_sigma and the shrinking rate -dR_sigma/dsigma along a sigma grid.

    The derivative is a central difference with step min(1e-4, spacing/10);
    one-sided differences are used where a neighbour has vanished or would
    be nonpositive. Vanished rows carry NaN values and ``vanished=True``.
    """
    grid = [float(s) for s in sigma_grid]
    if not grid:
        raise DomainError("sigma grid is empty")
    if any(s <= 0 for s in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("sigma grid must be positive and strictly increasing")
    spacing = min((b - a for a, b in zip(grid, grid[1:])), default=1.0)
    h = min(1e-4, spacing / 10.0)
    # the difference quotient amplifies root error by 1/h
    fine = RootSettings(min(settings.x_tol, 1e-4 * h), settings.max_iter, settings.bracket_growth)

    table = CurveTable(["d", "sigma", "R_sigma", "shrink_rate", "vanished"],
                       metadata={"R": R, "c": c, "rate": "-dR_sigma/dsigma"})
    for sig in grid:
        r0 = smoothed_ball_radius(R, d, c, sig, fine, q)
        if r0 is VANISHED:
            table.append(d, sig, math.nan, math.nan, True)
            continue
        r_plus = smoothed_ball_radius(R, d, c, sig + h, fine, q)
        r_minus = smoothed_ball_radius(R, d, c, sig - h, fine, q) if sig > h else VANISHED
        if r_plus is not VANISHED and r_minus is not VANISHED:
            slope = (r_plus - r_minus) / (2.0 * h)
        elif r_plus is not VANISHED:
            slope = (r_plus - r0) / h
        elif r_minus is not VANISHED:
            slope = (r0 - r_minus) / h
        else:
            slope = math.nan
        table.append(d, sig, r0, -slope, False)
    return table


def cone_projection(theta: float, d: int, c: int, sigma: float,
                    settings: RootSettings = DEFAULT_ROOTS,
                    q: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Largest axis coordinate a with cone probability >= 1/c (theta in radians).

    The unsmoothed cone touches a = 0, so a negative value measures shrinkage.
    """
    c = _check_c(c)
    target = 1.0 / c

    def g(a):
        return cone_axis_prob(theta, d, sigma, a, q) - target

    lo, hi = -sigma, sigma
    g_lo, g_hi = g(lo), g(hi)
    for _ in range(settings.max_iter):
        if g_lo >= 0:
            break
        lo *= settings.bracket_growth
        g_lo = g(lo)
    else:
        raise NumericalError("could not bracket the cone projection from below")
    for _ in range(settings.max_iter):
        if g_hi < 0:
            break
        hi *= settings.bracket_growth
        g_hi = g(hi)
    else:
        raise NumericalError("could not bracket the cone projection from above")
    tol = min(settings.x_tol, 1e-6 * sigma)
    return bisect(g, lo, hi, tol, settings.max_iter, f_lo=g_lo, f_hi=g_hi)
