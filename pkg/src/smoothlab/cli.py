"""Command-line sweeps that write CSV tables.

Exit codes: 0 on success, 2 on a usage error, 3 when a numerical routine
fails to converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .boundary import RootSettings, shrink_rate_curve, vanish_sigma
from .certify import (P_MAX_CURVE, ball_radius_curve, ball_radius_fn, cone_scaled_radius_curve,
                      cone_scaled_radius_fn, default_ball_grid, default_cone_grid,
                      peak_of_curve, zero_crossing)
from .curves import CurveTable
from .errors import DomainError, NumericalError
from .mc import DEFAULT_ALPHA, GENERATOR, mc_smoothed_prob
from .regions import BALL, CONE, HALFSPACE, INTERVAL1D, RegionSpec
from .smoothprob import (ball_axis_prob, cone_axis_prob, halfspace_prob, interval1d_prob)
from .synthetic import (SyntheticDataset, accuracy_original_rule, accuracy_smoothing_rule,
                        mutual_information, train_classifier)
from .thresholds import bounded_vanish_threshold, cone_narrowness_limit


class UsageError(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (start inclusive, stop inclusive up to rounding) or a comma list."""
    text = text.strip()
    if ":" not in text:
        return parse_floats(text)
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid {text!r} must look like start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}") from exc
    if not step > 0 or stop < start:
        raise UsageError(f"grid {text!r} needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_floats(text: str) -> list[float]:
    try:
        out = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if not out:
        raise UsageError("empty list")
    return out


def parse_ints(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    if not out:
        raise UsageError("empty list")
    return out


def _threads(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    try:
        return max(1, int(os.environ.get("SMOOTHLAB_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def _manifest(args, extra: dict | None = None) -> dict:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "out", "stamp", "jobs")}
    out = {"tool": f"smoothlab {__version__}", "subcommand": args.command,
           "parameters": json.dumps(params, sort_keys=True, default=str)}
    if extra:
        out.update(extra)
    if args.stamp or "SOURCE_DATE_EPOCH" in os.environ:
        epoch = int(os.environ.get("SOURCE_DATE_EPOCH", time.time()))
        out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(epoch))
    out["output"] = args.out or "-"
    return out


def _emit(table: CurveTable, args) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            table.to_csv(fh)
    else:
        table.to_csv(sys.stdout)


# shrink-rate -----------------------------------------------------------------

def _shrink_one(d, R, c, grid):
    return shrink_rate_curve(R, d, c, grid).rows


def cmd_shrink_rate(args) -> CurveTable:
    grid = parse_grid(args.sigma)
    if any(s <= 0 for s in grid):
        raise UsageError("sigma grid must be positive")
    ds = parse_ints(args.d)
    table = CurveTable(["d", "sigma", "R_sigma", "shrink_rate", "vanished"],
                       metadata=_manifest(args, {"shrink_rate": "-dR_sigma/dsigma"}))
    for rows in _map(partial(_shrink_one, R=args.R, c=args.c, grid=grid), ds, _threads(args)):
        table.rows.extend(rows)
    return table


def cmd_vanish(args) -> CurveTable:
    table = CurveTable(["d", "sigma_van_empirical", "sigma_van_bound"],
                       metadata=_manifest(args))
    for d in parse_ints(args.d):
        table.append(d, vanish_sigma(args.R, d, args.c),
                     bounded_vanish_threshold(args.R, args.c, d))
    return table


# certify ---------------------------------------------------------------------

def _ball_job(job, R, grid, p_max, peaks):
    d, a = job
    sig = grid if grid is not None else default_ball_grid(R, d)
    curve = ball_radius_curve(R, d, sig, a, p_max)
    if peaks:
        s, v = peak_of_curve(curve, "radius", ball_radius_fn(R, d, a, p_max))
        return [(d, a, s, v, zero_crossing(curve))]
    return [(d, a) + row for row in curve.rows]


def _cone_job(job, grid, p_max, peaks):
    theta_deg, d = job
    theta = math.radians(theta_deg)
    curve = cone_scaled_radius_curve(theta, d, grid if grid is not None else default_cone_grid(),
                                     p_max)
    if peaks:
        s, v = peak_of_curve(curve, "scaled_radius", cone_scaled_radius_fn(theta, d, p_max))
        return [(theta_deg, d, s, v, zero_crossing(curve, "scaled_radius"))]
    return [(theta_deg, d) + row for row in curve.rows]


def cmd_certify(args) -> CurveTable:
    grid = parse_grid(args.sigma_grid) if args.sigma_grid else None
    if grid is not None and any(s <= 0 for s in grid):
        raise UsageError("sigma grid must be positive")
    ds = parse_ints(args.d)
    jobs = _threads(args)
    meta = _manifest(args, {"p_max": args.p_max, "classes_for_certification": 2})
    if args.ball:
        a_grid = parse_grid(args.a_grid)
        if any(abs(a) > args.R for a in a_grid):
            raise UsageError("every a must satisfy |a| <= R")
        cols = (["d", "a", "peak_sigma", "peak_radius", "zero_sigma"] if args.peaks else
                ["d", "a", "sigma", "p_A", "radius", "abstained", "saturated"])
        work = partial(_ball_job, R=args.R, grid=grid, p_max=args.p_max, peaks=args.peaks)
        items = [(d, a) for d in ds for a in a_grid]
    else:
        thetas = parse_floats(args.theta)
        if any(not 0 < t < 90 for t in thetas):
            raise UsageError("theta must lie in (0, 90) degrees")
        cols = (["theta_deg", "d", "peak_sigma", "peak_scaled_radius", "zero_sigma"]
                if args.peaks else
                ["theta_deg", "d", "sigma", "p_A", "radius", "abstained", "saturated",
                 "scaled_radius"])
        work = partial(_cone_job, grid=grid, p_max=args.p_max, peaks=args.peaks)
        items = [(t, d) for t in thetas for d in ds]
    table = CurveTable(cols, metadata=meta)
    for rows in _map(work, items, jobs):
        table.rows.extend(rows)
    return table


# synthetic -------------------------------------------------------------------

def cmd_synthetic(args) -> CurveTable:
    if not 0 < args.eps < 0.5:
        raise UsageError("eps must lie in (0, 0.5)")
    ds = SyntheticDataset(args.a, args.k, args.eps)
    meta = _manifest(args)
    if args.mode == "mi":
        table = CurveTable(["sigma", "mutual_info_nats"], metadata=meta)
        for s in parse_grid(args.sigma):
            if s < 0:
                raise UsageError("sigma must be nonnegative")
            table.append(s, mutual_information(ds, s))
        return table
    if args.sigma_train is None or not args.sigma_train > 0:
        raise UsageError("--sigma-train must be given and positive")
    clf = train_classifier(ds, args.sigma_train)
    region = json.dumps([list(iv) for iv in clf.intervals])
    if args.mode == "original":
        table = CurveTable(["a", "k", "eps", "sigma_train", "class1_region", "accuracy"],
                           metadata=meta)
        table.append(args.a, args.k, args.eps, args.sigma_train, region,
                     accuracy_original_rule(ds, clf))
        return table
    sigma_infer = args.sigma_infer if args.sigma_infer is not None else args.sigma_train
    if not sigma_infer > 0:
        raise UsageError("--sigma-infer must be positive")
    table = CurveTable(["a", "k", "eps", "sigma_train", "sigma_infer", "class1_region",
                        "accuracy"], metadata=meta)
    table.append(args.a, args.k, args.eps, args.sigma_train, sigma_infer, region,
                 accuracy_smoothing_rule(ds, clf, sigma_infer))
    return table


# mc-check --------------------------------------------------------------------

def _load_region(text: str) -> RegionSpec:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return RegionSpec.from_json(text)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def analytic_value(region: RegionSpec, point: np.ndarray, sigma: float) -> float | None:
    """Deterministic probability when the point allows one, else None."""
    a = float(point[-1])
    on_axis = not np.any(point[:-1])
    if region.kind == HALFSPACE:
        return halfspace_prob(region.offset, sigma, a)
    if region.kind == INTERVAL1D:
        return interval1d_prob(region.intervals, sigma, a)
    if not on_axis:
        return None
    if region.kind == BALL:
        return ball_axis_prob(region.radius, region.dim, sigma, a)
    if region.kind == CONE:
        return cone_axis_prob(region.theta, region.dim, sigma, a)
    return None


def cmd_mc_check(args) -> CurveTable:
    region = _load_region(args.region)
    point = np.array(parse_floats(args.point)) if args.point else np.zeros(region.dim)
    if point.size != region.dim:
        raise UsageError(f"point has {point.size} coordinates, region has dim {region.dim}")
    if not args.sigma > 0 or args.n < 100:
        raise UsageError("need sigma > 0 and n >= 100")
    if not 0 <= args.seed < 1 << 64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    est = mc_smoothed_prob(region, point, args.sigma, args.n, args.seed, args.alpha,
                           threads=_threads(args))
    exact = analytic_value(region, point, args.sigma)
    z = None
    if exact is not None:
        se = math.sqrt(max(exact * (1 - exact), 1e-300) / args.n)
        z = (est.p_hat - exact) / se
    table = CurveTable(["p_hat", "lower_cp", "analytic", "z_score", "n", "seed"],
                       metadata=_manifest(args, {"generator": GENERATOR}))
    table.append(est.p_hat, est.lower_cp, exact, z, est.n, est.seed)
    return table


def cmd_narrowness(args) -> CurveTable:
    table = CurveTable(["c", "d", "theta_limit_degrees"], metadata=_manifest(args))
    for c in parse_ints(args.c):
        for d in parse_ints(args.d):
            table.append(c, d, cone_narrowness_limit(c, d))
    return table


# parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="smoothlab", description="Randomized smoothing on canonical regions.")
    p.add_argument("--version", action="version", version=f"smoothlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        sp.add_argument("--stamp", action="store_true", help="add a timestamp to the manifest")
        sp.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $SMOOTHLAB_THREADS or 1)")

    sp = sub.add_parser("shrink-rate", help="R_sigma and -dR_sigma/dsigma for balls")
    sp.add_argument("--R", type=float, default=1.0)
    sp.add_argument("--c", type=int, default=2)
    sp.add_argument("--d", required=True, help="comma-separated dimensions")
    sp.add_argument("--sigma", default="0.01:0.7:0.005", help="start:stop:step")
    common(sp)
    sp.set_defaults(func=cmd_shrink_rate)

    sp = sub.add_parser("vanish", help="vanishing smoothing factor per dimension")
    sp.add_argument("--R", type=float, default=1.0)
    sp.add_argument("--c", type=int, default=2)
    sp.add_argument("--d", required=True)
    common(sp)
    sp.set_defaults(func=cmd_vanish)

    sp = sub.add_parser("certify", help="certified radius against sigma")
    geo = sp.add_mutually_exclusive_group(required=True)
    geo.add_argument("--ball", action="store_true")
    geo.add_argument("--cone", action="store_true")
    sp.add_argument("--R", type=float, default=1.0)
    sp.add_argument("--d", default="25")
    sp.add_argument("--theta", default="45", help="cone half-angles in degrees")
    sp.add_argument("--a-grid", default="0", help="ball axis coordinates")
    sp.add_argument("--sigma-grid", default=None)
    sp.add_argument("--p-max", type=float, default=P_MAX_CURVE,
                    help="cap on p_A before the quantile")
    sp.add_argument("--peaks", action="store_true",
                    help="one row per curve with its peak and first zero")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("synthetic", help="three-point dataset experiments")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--k", type=float, default=2.0)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--sigma-train", type=float, default=None)
    sp.add_argument("--sigma-infer", type=float, default=None)
    sp.add_argument("--sigma", default="0", help="sigma grid for --mode mi")
    sp.add_argument("--mode", choices=["original", "smoothed", "mi"], default="original")
    common(sp)
    sp.set_defaults(func=cmd_synthetic)

    sp = sub.add_parser("mc-check", help="Monte Carlo estimate against the analytic value")
    sp.add_argument("--region", required=True, help="region JSON, or @path")
    sp.add_argument("--point", default=None, help="comma-separated coordinates")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    common(sp)
    sp.set_defaults(func=cmd_mc_check)

    sp = sub.add_parser("narrowness", help="largest cone half-angle guaranteeing shrinkage")
    sp.add_argument("--c", required=True)
    sp.add_argument("--d", required=True)
    common(sp)
    sp.set_defaults(func=cmd_narrowness)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        table = args.func(args)
        _emit(table, args)
    except UsageError as exc:
        print(f"smoothlab: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"smoothlab: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"smoothlab: numerical failure: {exc} (estimate {exc.estimate}, "
              f"bound {exc.error_bound})", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
