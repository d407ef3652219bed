#!/usr/bin/env python3
"""Gradient-blow-up demonstration: evaluate the applicable criterion on
steep initial data, simulate to breakdown, and compare the observed
breakdown time against the Riccati upper bound computed along the
traced forward characteristic.

Usage: python scripts/blowup_demo.py [--gamma 2.0] [--lam 0.0] [--n 256]
"""

import argparse

import numpy as np

from shockline import DampingLaw, GasModel, Grid, evaluate
from shockline.fields import init_field
from shockline.riccati import RiccatiProblem, blowup_time_upper_bound_case1
from shockline.core import riccati_coefficients
from shockline.solver import Direction, run, trace_characteristic


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gamma", type=float, default=2.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--lam", type=float, default=0.0)
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--u-amp", type=float, default=-6.0)
    args = ap.parse_args()

    gm = GasModel(args.gamma, 1.0)
    dl = DampingLaw(args.alpha, args.lam)
    grid = Grid(n=args.n, length=10.0)
    field = init_field(
        {"preset": "gaussian", "tau0": 1.0, "u_amp": args.u_amp, "width": 0.5},
        grid, gm, dl,
    )

    verdict = evaluate(field, gm, dl)
    print(f"criterion {verdict.theorem.value}: fired={verdict.fired}")
    if verdict.fired:
        print(f"  witness x={verdict.witness_x:.4f}  "
              f"lhs={verdict.lhs:.4f} < rhs={verdict.rhs:.4f}")

    result = run(field, 5.0)
    if not result.broke_down:
        print(f"no breakdown before t={result.outcome.t}")
        return
    rep = result.outcome
    print(f"breakdown observed: t in [{rep.t_prev:.6f}, {rep.t:.6f}], "
          f"max|u_x| = {rep.max_abs_ux:.2f}")

    # Riccati upper bound along the characteristic through the witness
    x0 = verdict.witness_x if verdict.witness_x is not None else 5.0
    trace = trace_characteristic(result, x0, Direction.FORWARD)
    t_knots, phi_knots = trace.times, trace.phi

    def coeffs(t):
        phi = float(np.interp(t, t_knots, phi_knots))
        c0, c2 = riccati_coefficients(gm, dl, phi, t)
        return float(min(c0, 0.0)), float(c2)  # clip roundoff-positive c0

    y0 = float(trace.y_or_q[0])
    if y0 < 0.0:
        prob = RiccatiProblem(coeff_source=coeffs, y0=y0)
        bound = blowup_time_upper_bound_case1(prob, t_max=100.0)
        print(f"Riccati upper bound from traced y(0)={y0:.3f}: "
              f"t* <= {bound:.6f}")
        print(f"observed breakdown precedes the bound: {rep.t <= bound}")
    else:
        print(f"traced y(0)={y0:.3f} >= 0; case-1 bound not applicable here")


if __name__ == "__main__":
    main()
