"""Closed-form sufficient smoothing thresholds for shrinkage and vanishing.

All logarithms are natural. Thresholds are strict: the stated behaviour is
guaranteed for sigma strictly above the returned value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError
from .specfn import std_normal_quantile


def _check_c(c: int) -> int:
    if int(c) != c or c < 2:
        raise DomainError(f"class count c must be an integer >= 2, got {c}")
    return int(c)


def _check_d(d: int, least: int) -> int:
    if int(d) != d or d < least:
        raise DomainError(f"dimension must be an integer >= {least}, got {d}")
    return int(d)


def _check_theta(theta_deg: float) -> float:
    if not 0 < theta_deg < 90:
        raise DomainError("theta must lie in (0, 90) degrees")
    return math.radians(theta_deg)


@dataclass(frozen=True)
class ThresholdReport:
    kind: str
    sigma_threshold: float
    condition_met: bool
    inputs: dict = field(default_factory=dict)


def bounded_shrink_threshold(R: float, c: int, d: int) -> float:
    """sigma above which the smoothed ball's radius is below R."""
    if not R > 0:
        raise DomainError("R must be positive")
    c = _check_c(c)
    d = _check_d(d, 3)
    return R * math.sqrt(c) / math.sqrt(2.0 * (d - 1))


def bounded_vanish_threshold(R: float, c: int, d: int) -> float:
    """sigma above which the smoothed ball region is empty."""
    if not R > 0:
        raise DomainError("R must be positive")
    c = _check_c(c)
    d = _check_d(d, 2)
    return R * math.sqrt(c) / math.sqrt(d)


def cone_narrowness_limit(c: int, d: int) -> float:
    """Largest cone half-angle in degrees for which shrinkage is guaranteed."""
    c = _check_c(c)
    d = _check_d(d, 2)
    if c == 2:
        return 90.0
    return math.degrees(math.atan(math.sqrt((d - 1) / (2.0 * c * math.log(c - 1)))))


def _cone_margin(tan2: float, c: int, d: int) -> float:
    return (d - 1) - 2.0 * tan2 * c * math.log(c - 1)


def cone_shrink_threshold(gap: float, theta_deg: float, c: int, d: int) -> ThresholdReport:
    """Smoothing factor beyond which a region's projection drops below its
    bounding cone's projection by the given gap."""
    if math.isnan(gap) or gap < 0:
        raise DomainError("gap must be nonnegative")
    theta = _check_theta(theta_deg)
    c = _check_c(c)
    d = _check_d(d, 2)
    inputs = {"gap": gap, "theta_deg": theta_deg, "c": c, "d": d}
    if theta_deg >= cone_narrowness_limit(c, d):
        return ThresholdReport("cone_shrink", math.inf, False, inputs)
    tan = math.tan(theta)
    margin = _cone_margin(tan * tan, c, d)
    sigma = gap * tan * math.sqrt(c / (d - 1)) * 2.0 * (d - 1) / margin
    return ThresholdReport("cone_shrink", sigma, True, inputs)


def cone_shrink_rate_bound(theta_deg: float, c: int, d: int) -> float:
    """Lower bound on the drop of the smoothed cone's projection per unit sigma."""
    theta = _check_theta(theta_deg)
    c = _check_c(c)
    d = _check_d(d, 2)
    tan2 = math.tan(theta) ** 2
    rate = math.sqrt((d - 1) / (c * tan2)) * _cone_margin(tan2, c, d) / (2.0 * (d - 1))
    return max(rate, 0.0)


class UnidimThresholds(NamedTuple):
    shrink: float
    vanish: float


def unidim_thresholds(R: float, c: int) -> UnidimThresholds:
    """Shrink and vanish thresholds for the interval [-R, R] in one dimension.

    The shrink formula divides by Phi^-1(1/2 + 1/c), which diverges at c = 2;
    that case is reported as +inf.
    """
    if not R > 0:
        raise DomainError("R must be positive")
    c = _check_c(c)
    vanish = R / std_normal_quantile(0.5 + 0.5 / c)
    shrink = math.inf if c == 2 else 2.0 * R / std_normal_quantile(0.5 + 1.0 / c)
    return UnidimThresholds(shrink, vanish)
