"""Canonical decision regions.

Every region lives in a fixed frame: balls are centred at the origin, cones
have their apex at the origin and open along -e_d, and half-spaces are
{x : x_d <= b}. Boundary points count as inside.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

BALL = "ball"
CONE = "cone"
HALFSPACE = "halfspace"
INTERVAL1D = "interval1d"
KINDS = (BALL, CONE, HALFSPACE, INTERVAL1D)


def _check_intervals(intervals) -> tuple[tuple[float, float], ...]:
    out = tuple((float(lo), float(hi)) for lo, hi in intervals)
    for lo, hi in out:
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise DomainError(f"interval [{lo}, {hi}] must satisfy lo < hi")
    for (_, hi0), (lo1, _) in zip(out[:-1], out[1:]):
        if not hi0 < lo1:
            raise DomainError("intervals must be ordered and pairwise disjoint")
    return out


@dataclass(frozen=True)
class RegionSpec:
    """A ball, cone, half-space or union of intervals in canonical pose.

    ``theta`` is the cone half-angle in radians, measured from the axis.
    """

    kind: str
    dim: int
    radius: float = math.nan
    theta: float = math.nan
    offset: float = math.nan
    intervals: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown region kind {self.kind!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError("dim must be a positive integer")
        if self.kind == BALL and not self.radius > 0:
            raise DomainError("ball radius must be positive")
        if self.kind == CONE and not 0 < self.theta < math.pi / 2:
            raise DomainError("cone half-angle must lie in (0, pi/2)")
        if self.kind == HALFSPACE and not math.isfinite(self.offset):
            raise DomainError("half-space offset must be finite")
        if self.kind == INTERVAL1D:
            if self.dim != 1:
                raise DomainError("interval regions are one-dimensional")
            object.__setattr__(self, "intervals", _check_intervals(self.intervals))

    @classmethod
    def ball(cls, radius: float, dim: int) -> "RegionSpec":
        return cls(BALL, dim, radius=float(radius))

    @classmethod
    def cone(cls, theta: float, dim: int) -> "RegionSpec":
        return cls(CONE, dim, theta=float(theta))

    @classmethod
    def cone_deg(cls, theta_deg: float, dim: int) -> "RegionSpec":
        return cls(CONE, dim, theta=math.radians(theta_deg))

    @classmethod
    def halfspace(cls, offset: float, dim: int) -> "RegionSpec":
        return cls(HALFSPACE, dim, offset=float(offset))

    @classmethod
    def interval1d(cls, intervals: Sequence[Sequence[float]]) -> "RegionSpec":
        return cls(INTERVAL1D, 1, intervals=tuple(tuple(iv) for iv in intervals))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim}
        if self.kind == BALL:
            out["radius"] = self.radius
        elif self.kind == CONE:
            out["theta_deg"] = math.degrees(self.theta)
        elif self.kind == HALFSPACE:
            out["offset"] = self.offset
        else:
            out["intervals"] = [list(iv) for iv in self.intervals]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RegionSpec":
        try:
            kind = str(data["kind"]).lower()
            dim = int(data.get("dim", 1))
            if kind == BALL:
                return cls.ball(data["radius"], dim)
            if kind == CONE:
                if "theta_deg" in data:
                    return cls.cone_deg(data["theta_deg"], dim)
                return cls.cone(data["theta"], dim)
            if kind == HALFSPACE:
                return cls.halfspace(data["offset"], dim)
            if kind == INTERVAL1D:
                return cls.interval1d(data["intervals"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed region: {exc}") from exc
        raise DomainError(f"unknown region kind {data.get('kind')!r}")

    @classmethod
    def from_json(cls, text: str) -> "RegionSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed region JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DomainError("region JSON must be an object")
        return cls.from_dict(data)

    def contains(self, point) -> bool:
        return bool(self.contains_many(np.asarray(point, dtype=float)[None, :])[0])

    def contains_many(self, points) -> np.ndarray:
        """Membership for each row of an (n, dim) array."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DomainError(f"points must have shape (n, {self.dim}), got {pts.shape}")
        last = pts[:, -1]
        if self.kind == BALL:
            return np.einsum("ij,ij->i", pts, pts) <= self.radius * self.radius
        if self.kind == CONE:
            norm = np.sqrt(np.einsum("ij,ij->i", pts, pts))
            return last + norm * math.cos(self.theta) <= 0.0
        if self.kind == HALFSPACE:
            return last <= self.offset
        inside = np.zeros(pts.shape[0], dtype=bool)
        for lo, hi in self.intervals:
            inside |= (last >= lo) & (last <= hi)
        return inside


def contains(region: RegionSpec, point) -> bool:
    pts = np.asarray(point, dtype=float)
    if pts.ndim != 1 or pts.size != region.dim:
        raise DomainError(f"point has length {pts.size}, region has dim {region.dim}")
    return region.contains(pts)


@dataclass(frozen=True)
class AxisPoint:
    """The point ``coordinate * e_d`` on the symmetry axis of ``region``."""

    region: RegionSpec
    coordinate: float

    def __post_init__(self):
        if not math.isfinite(self.coordinate):
            raise DomainError("axis coordinate must be finite")

    def vector(self) -> np.ndarray:
        out = np.zeros(self.region.dim)
        out[-1] = self.coordinate
        return out


def axis_point(dim: int, a: float) -> np.ndarray:
    out = np.zeros(dim)
    out[-1] = a
    return out


def bounding_cone_projection_gap(region: RegionSpec, gap: float) -> float:
    """Validate the projection gap between a region and its bounding cone."""
    if region.kind != CONE:
        raise DomainError("bounding-cone gap is defined for cone regions")
    if math.isnan(gap) or gap < 0:
        raise DomainError("projection gap must be nonnegative")
    return float(gap)
