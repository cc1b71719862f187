"""Gaussian-smoothed class-1 probabilities at axis points of canonical regions.

For a ball or cone with symmetry axis e_d, integrating the d-1 transverse
coordinates of the noise in closed form leaves a one-dimensional integral
over the axial coordinate t,

    p(a) = int Q((d-1)/2, r(t)^2 / (2 sigma^2)) phi_sigma(t - a) dt,

where r(t) is the radius of the region's cross-section at height t. These
integrals are evaluated by adaptive Simpson; half-spaces and intervals have
closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .quadrature import adaptive_simpson
from .regions import _check_intervals
from .specfn import (reg_lower_gamma, reg_lower_gamma_array, std_normal_cdf,
                     std_normal_sf)

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-10
    max_subdivisions: int = 2000
    tail_sigmas: float = 10.0

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not self.tail_sigmas >= 6:
            raise DomainError("tail_sigmas must be at least 6")


DEFAULT_QUADRATURE = QuadratureSettings()


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be a positive finite number, got {value}")
    return value


def _dim(d: int, least: int) -> int:
    if int(d) != d or d < least:
        raise DomainError(f"dimension must be an integer >= {least}, got {d}")
    return int(d)


def _clip01(p: float) -> float:
    return min(1.0, max(0.0, p))


def _gauss_breaks(a: float, sigma: float) -> list[float]:
    return [a + k * sigma for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]


def ball_origin_prob(R: float, d: int, sigma: float) -> float:
    """Probability that N(0, sigma^2 I_d) lands in the centred ball of radius R."""
    R = _positive("R", R)
    sigma = _positive("sigma", sigma)
    d = _dim(d, 1)
    return reg_lower_gamma(0.5 * d, R * R / (2.0 * sigma * sigma))


def ball_axis_prob(R: float, d: int, sigma: float, a: float,
                   q: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Smoothed probability of the ball at the axis point a*e_d."""
    R = _positive("R", R)
    sigma = _positive("sigma", sigma)
    d = _dim(d, 1)
    a = float(a)
    if not math.isfinite(a):
        raise DomainError("a must be finite")
    if d == 1:
        return interval1d_prob([(-R, R)], sigma, a)
    lo = max(-R, a - q.tail_sigmas * sigma)
    hi = min(R, a + q.tail_sigmas * sigma)
    if lo >= hi:
        return 0.0
    s = 0.5 * (d - 1)
    inv2s2 = 1.0 / (2.0 * sigma * sigma)
    norm = _INV_SQRT_2PI / sigma
    # the radial factor switches on within about s * sigma^2 / R of the rim
    rim = [m * max(s, 1.0) * sigma * sigma / R for m in (0.25, 1.0, 4.0, 16.0)]
    gauss = _gauss_breaks(a, sigma)

    # Each half of [-R, R] is integrated in u = R - |t|, the distance to the
    # rim, so that the sharp switch-on next to the rim is resolved in a
    # variable that keeps full relative precision there.
    total = 0.0
    for sign in (1.0, -1.0):
        t_lo, t_hi = (max(lo, 0.0), hi) if sign > 0 else (lo, min(hi, 0.0))
        if t_lo >= t_hi:
            continue
        shift = R - sign * a

        def integrand(u, shift=shift):
            z = (shift - u) / sigma
            return reg_lower_gamma_array(s, u * (2.0 * R - u) * inv2s2) * np.exp(-0.5 * z * z) * norm

        u_lo, u_hi = sorted((R - sign * t_lo, R - sign * t_hi))
        breaks = rim + [R - sign * b for b in gauss]
        value, _ = adaptive_simpson(integrand, u_lo, u_hi, 0.5 * q.abs_tol,
                                    q.max_subdivisions, breaks)
        total += value
    return _clip01(total)


def cone_axis_prob(theta: float, d: int, sigma: float, a: float,
                   q: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Smoothed probability of the cone at the axis point a*e_d.

    ``theta`` is the half-angle in radians. The cross-section at height
    t <= 0 is a (d-1)-ball of radius |t| tan(theta).
    """
    theta = float(theta)
    if not 0 < theta < math.pi / 2:
        raise DomainError("theta must lie in (0, pi/2)")
    sigma = _positive("sigma", sigma)
    d = _dim(d, 2)
    a = float(a)
    if not math.isfinite(a):
        raise DomainError("a must be finite")
    lo = a - q.tail_sigmas * sigma
    hi = min(0.0, a + q.tail_sigmas * sigma)
    if lo >= hi:
        return 0.0
    s = 0.5 * (d - 1)
    k = math.tan(theta) ** 2 / (2.0 * sigma * sigma)

    def integrand(t):
        z = (t - a) / sigma
        return reg_lower_gamma_array(s, k * t * t) * np.exp(-0.5 * z * z) * (_INV_SQRT_2PI / sigma)

    # the radial factor switches on over |t| ~ sigma sqrt(d) / tan(theta)
    w = sigma * math.sqrt(d - 1) / math.tan(theta)
    breaks = _gauss_breaks(a, sigma) + [-f * w for f in (0.25, 0.5, 1.0, 2.0)]
    # mass below lo is at most Phi(-tail_sigmas) and is dropped
    value, _ = adaptive_simpson(integrand, lo, hi, q.abs_tol, q.max_subdivisions, breaks)
    return _clip01(value)


def scale_invariance_check(theta: float, d: int, sigma: float, a: float,
                           q: QuadratureSettings = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """Cone probability at (sigma, a) and at the rescaled (1, a / sigma)."""
    sigma = _positive("sigma", sigma)
    return (cone_axis_prob(theta, d, sigma, a, q),
            cone_axis_prob(theta, d, 1.0, a / sigma, q))


def halfspace_prob(b: float, sigma: float, a: float) -> float:
    """Smoothed probability of {x : x_d <= b} at a point with x_d = a."""
    sigma = _positive("sigma", sigma)
    return std_normal_cdf((float(b) - float(a)) / sigma)


def _mass(lo: float, hi: float) -> float:
    # Phi(hi) - Phi(lo), taken from the tail that avoids cancellation
    if lo > 0:
        return std_normal_sf(lo) - std_normal_sf(hi)
    return std_normal_cdf(hi) - std_normal_cdf(lo)


def interval1d_prob(intervals: Sequence[Sequence[float]], sigma: float, a: float) -> float:
    """Probability that a + sigma*z falls in a disjoint union of intervals."""
    sigma = _positive("sigma", sigma)
    ivs = _check_intervals(intervals)
    a = float(a)
    total = math.fsum(_mass((lo - a) / sigma, (hi - a) / sigma) for lo, hi in ivs)
    return _clip01(total)
