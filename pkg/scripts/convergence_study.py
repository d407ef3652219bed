#!/usr/bin/env python3
"""Grid-convergence study of the simulator and of the characteristic
cross-validation.

Reports the self-convergence order of the scheme on an undamped smooth
wave and the trace-vs-Riccati deviation under refinement.

Usage: python scripts/convergence_study.py [--grids 128 256 512]
"""

import argparse
import math

import numpy as np

from shockline import DampingLaw, GasModel, Grid
from shockline.fields import init_field
from shockline.solver import Direction, cross_validate_riccati, run, trace_characteristic


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grids", type=int, nargs="+", default=[128, 256, 512])
    ap.add_argument("--t-end", type=float, default=0.5)
    args = ap.parse_args()

    gm = GasModel(2.0, 1.0)
    dl0 = DampingLaw(0.0, 0.0)

    print("scheme self-convergence (undamped smooth wave)")
    sols = {}
    for n in args.grids:
        f = init_field({"preset": "sine", "tau0": 1.0, "u_amp": -0.1},
                       Grid(n=n, length=10.0), gm, dl0)
        sols[n] = run(f, args.t_end, monitors_requested=False).outcome
    for a, b in zip(args.grids, args.grids[1:]):
        stride = b // a
        err = float(np.max(np.abs(sols[b].u[::stride] - sols[a].u)))
        print(f"  n={a:4d} vs n={b:4d}: max diff {err:.3e}")
    diffs = [
        float(np.max(np.abs(sols[b].u[:: b // a] - sols[a].u)))
        for a, b in zip(args.grids, args.grids[1:])
    ]
    for i in range(1, len(diffs)):
        print(f"  observed order: {math.log2(diffs[i - 1] / diffs[i]):.3f}")

    print("characteristic cross-validation (damped)")
    dl = DampingLaw(1.0, 0.0)
    for n in args.grids:
        f = init_field({"preset": "sine", "tau0": 1.0, "u_amp": -0.2},
                       Grid(n=n, length=10.0), gm, dl)
        res = run(f, 0.8, monitors_requested=False)
        tr = trace_characteristic(res, 2.5, Direction.FORWARD)
        rep = cross_validate_riccati(tr, gm, dl, 0.01)
        print(f"  n={n:4d}: deviation {rep.deviation:.3e}")


if __name__ == "__main__":
    main()
