#!/usr/bin/env python3
"""Integrate every catalog model from its default phase point and write
plot-ready CSV files (one per case) into the given directory.

Usage: sample_trajectories.py [outdir] [horizon]
"""

import pathlib
import sys

from pointaffine import catalog, integrate as integ
from pointaffine.cli import trajectory_csv


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "trajectories")
    horizon = float(sys.argv[2]) if len(sys.argv) > 2 else 5.0
    outdir.mkdir(parents=True, exist_ok=True)
    for spec in catalog.default_specs():
        traj = integ.integrate(spec, catalog.default_phase_point(spec.case),
                               (0.0, horizon))
        path = outdir / f"{spec.case}.csv"
        with open(path, "w", newline="") as fh:
            fh.write(trajectory_csv(spec, traj))
        drift = max(integ.integral_drift(spec, traj).values())
        print(f"{spec.case}: {len(traj)} nodes, stop={traj.stop_reason}, "
              f"max_drift={drift:.2e} -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
