"""Certified radii and their dependence on the smoothing factor.

With the runner-up bound taken as 1 - p_A, the certified l2 radius is
sigma * Phi^-1(p_A), and the classifier abstains when p_A < 1/2.
Certification is always one-vs-rest, so the effective class count is 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .boundary import vanish_sigma
from .curves import CurveTable
from .errors import DomainError
from .roots import golden_max
from .smoothprob import (DEFAULT_QUADRATURE, QuadratureSettings, ball_axis_prob,
                         cone_axis_prob)
from .specfn import std_normal_quantile

P_MAX_DEFAULT = 1.0 - 1e-15
# Largest Clopper-Pearson lower bound reachable with n = 100000 samples at
# alpha = 0.001, i.e. alpha ** (1 / n). Curves default to this cap so that
# tiny sigma does not certify more than a sampled certificate could.
CURVE_N = 100_000
CURVE_ALPHA = 0.001
P_MAX_CURVE = CURVE_ALPHA ** (1.0 / CURVE_N)
DEFAULT_POINTS = 200


@dataclass(frozen=True)
class CertifyResult:
    p_A: float
    p_B_bar: float
    radius: float
    abstained: bool
    saturated: bool = False


def certified_radius(p_A: float, sigma: float, p_max: float = P_MAX_DEFAULT) -> CertifyResult:
    """Radius sigma * Phi^-1(p_A), abstaining when p_A < 1/2.

    ``p_A`` above ``p_max`` is clamped and the result flagged as saturated.
    """
    p_A = float(p_A)
    if not 0.0 <= p_A <= 1.0:
        raise DomainError(f"p_A must lie in [0, 1], got {p_A}")
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    if not 0.5 < p_max < 1.0:
        raise DomainError("p_max must lie in (0.5, 1)")
    if p_A < 0.5:
        return CertifyResult(p_A, 1.0 - p_A, 0.0, True, False)
    saturated = p_A > p_max
    p = p_max if saturated else p_A
    radius = 0.0 if p == 0.5 else sigma * std_normal_quantile(p)
    return CertifyResult(p_A, 1.0 - p_A, max(radius, 0.0), False, saturated)


def default_ball_grid(R: float, d: int, points: int = DEFAULT_POINTS) -> list[float]:
    top = 1.2 * vanish_sigma(R, d, 2)
    return [top * i / points for i in range(1, points + 1)]


def default_cone_grid(points: int = DEFAULT_POINTS, top: float = 3.0) -> list[float]:
    return [top * i / points for i in range(1, points + 1)]


_COLUMNS = ["sigma", "p_A", "radius", "abstained", "saturated"]


def ball_radius_curve(R: float, d: int, sigma_grid: Sequence[float] | None = None,
                      a: float = 0.0, p_max: float = P_MAX_CURVE,
                      q: QuadratureSettings = DEFAULT_QUADRATURE) -> CurveTable:
    """Certified radius at the axis point a*e_d of the ball, across sigma."""
    if abs(a) > R:
        raise DomainError("the evaluation point must lie inside the ball")
    grid = default_ball_grid(R, d) if sigma_grid is None else list(sigma_grid)
    table = CurveTable(list(_COLUMNS), metadata={"geometry": "ball", "R": R, "d": d,
                                                 "a": a, "p_max": p_max})
    for sig in grid:
        res = certified_radius(ball_axis_prob(R, d, sig, a, q), sig, p_max)
        table.append(sig, res.p_A, res.radius, res.abstained, res.saturated)
    return table


def ball_radius_fn(R: float, d: int, a: float = 0.0, p_max: float = P_MAX_CURVE,
                   q: QuadratureSettings = DEFAULT_QUADRATURE) -> Callable[[float], float]:
    return lambda sig: certified_radius(ball_axis_prob(R, d, sig, a, q), sig, p_max).radius


def cone_scaled_radius_curve(theta: float, d: int, sigma_grid: Sequence[float] | None = None,
                             p_max: float = P_MAX_CURVE,
                             q: QuadratureSettings = DEFAULT_QUADRATURE) -> CurveTable:
    """Certified radius at -e_d divided by sin(theta), the point's distance to
    the cone boundary. ``theta`` is in radians."""
    grid = default_cone_grid() if sigma_grid is None else list(sigma_grid)
    sin = math.sin(theta)
    table = CurveTable(list(_COLUMNS) + ["scaled_radius"],
                       metadata={"geometry": "cone", "theta_deg": math.degrees(theta),
                                 "d": d, "a": -1.0, "p_max": p_max})
    for sig in grid:
        res = certified_radius(cone_axis_prob(theta, d, sig, -1.0, q), sig, p_max)
        table.append(sig, res.p_A, res.radius, res.abstained, res.saturated, res.radius / sin)
    return table


def cone_scaled_radius_fn(theta: float, d: int, p_max: float = P_MAX_CURVE,
                          q: QuadratureSettings = DEFAULT_QUADRATURE) -> Callable[[float], float]:
    sin = math.sin(theta)
    return lambda sig: certified_radius(cone_axis_prob(theta, d, sig, -1.0, q),
                                        sig, p_max).radius / sin


def peak_of_curve(curve: CurveTable, column: str = "radius",
                  refine: Callable[[float], float] | None = None,
                  x_column: str = "sigma", tol: float = 1e-4) -> tuple[float, float]:
    """(sigma, value) at the curve's maximum.

    Ties go to the smallest sigma. With ``refine`` given, an interior grid
    maximum is polished by golden-section search of ``refine`` over its two
    neighbouring cells.
    """
    if len(curve) == 0:
        raise DomainError("empty curve")
    xs = np.asarray(curve.column(x_column), dtype=float)
    ys = np.asarray(curve.column(column), dtype=float)
    i = int(np.argmax(ys))
    best = (float(xs[i]), float(ys[i]))
    if refine is None or i == 0 or i == len(xs) - 1:
        return best
    x, y = golden_max(refine, float(xs[i - 1]), float(xs[i + 1]), tol)
    return (x, y) if y >= best[1] else best


def zero_crossing(curve: CurveTable, column: str = "radius") -> float:
    """First sigma after the peak where the column is 0, or inf if none."""
    ys = curve.column(column)
    xs = curve.column("sigma")
    start = int(np.argmax(ys))
    for x, y in zip(xs[start:], ys[start:]):
        if y == 0.0:
            return float(x)
    return math.inf
