#!/usr/bin/env python3
"""Write the CSV tables behind the figures and constants into a directory.

Usage: python3 scripts/reproduce_figures.py [OUTDIR] [--jobs N]
"""

import argparse
import os
import sys
import time

from smoothlab.cli import main

RUNS = {
    "shrink_rate.csv": ["shrink-rate", "--d", "3,15,20,50", "--sigma", "0.01:0.7:0.005"],
    "vanish.csv": ["vanish", "--d", "2,3,5,8,10,20,30,40,50,75,100"],
    "ball_radius_curves.csv": ["certify", "--ball", "--R", "1", "--d", "3,8,20,30,40,50"],
    "ball_radius_peaks.csv": ["certify", "--ball", "--R", "1", "--d", "3,8,20,30,40,50",
                              "--peaks"],
    "ball_radius_surface_d30.csv": ["certify", "--ball", "--R", "1", "--d", "30",
                                    "--a-grid", "0:1:0.02", "--sigma-grid", "0.01:0.25:0.002"],
    "cone_radius_curves.csv": ["certify", "--cone", "--theta", "10,20,30,40,50,60,70,80",
                               "--d", "25", "--sigma-grid", "0.005:3:0.005"],
    "cone_radius_peaks.csv": ["certify", "--cone", "--theta", "10,20,30,40,50,60,70,80",
                              "--d", "25", "--sigma-grid", "0.005:3:0.005", "--peaks"],
    "cone_radius_peaks_theta45.csv": ["certify", "--cone", "--theta", "45",
                                      "--d", "5,15,25,50", "--peaks"],
    "narrowness.csv": ["narrowness", "--c", "2,3,10,100,1000", "--d", "784,3072,150528,196608"],
    "mutual_information.csv": ["synthetic", "--a", "1", "--k", "2", "--eps", "0.1", "--mode",
                               "mi", "--sigma", "0:8:0.05"],
}


def run(outdir: str, jobs: int) -> int:
    os.makedirs(outdir, exist_ok=True)
    for name, argv in RUNS.items():
        start = time.perf_counter()
        code = main(argv + ["--jobs", str(jobs), "--out", os.path.join(outdir, name)])
        print(f"{name}: exit {code}, {time.perf_counter() - start:.1f}s", file=sys.stderr)
        if code:
            return code
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default="figures")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args()
    sys.exit(run(args.outdir, args.jobs))
