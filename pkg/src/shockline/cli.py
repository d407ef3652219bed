"""Batch front-end: scenario configs, theorem evaluation, simulation,
parameter sweeps, and deterministic CSV/JSON emission.

Verbs: check (criteria only), simulate (full run), sweep, validate
(config lint).  Config files are YAML with sections gas, damping,
profile, grid, run, outputs (see README for the schema).  All floats
are serialized with 17 significant digits so identical configs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import bounds, criteria, solver
from .core import DampingLaw, GasModel
from .errors import (
    ConfigError,
    DomainError,
    RangeError,
    RegimeError,
    ShocklineError,
    ToleranceError,
    TraceError,
    VacuumError,
)
from .fields import PRESETS, Grid, init_field

log = logging.getLogger("shockline")

TRACE_HEADER = "t,x,phi,y_or_q,riccati_y,deviation"
MONITOR_HEADER = "t,max_abs_ux,min_rho,y_max,q_max,flags"
SWEEP_BUDGET_DEFAULT = 4096

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------
# config loading and validation
# ---------------------------------------------------------------------

def _need(cfg: dict, key: str, section: str):
    if key not in cfg:
        raise ConfigError(f"missing key {key!r} in section {section!r}")
    return cfg[key]


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"config is not valid YAML: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a mapping")
    return cfg


def build_scenario(cfg: dict) -> dict:
    """Validate a scenario config and construct all domain objects.

    Every downstream precondition is checked here so that invalid
    configs never reach compute.
    """
    try:
        gas_cfg = _need(cfg, "gas", "scenario")
        gm = GasModel(
            gamma=float(_need(gas_cfg, "gamma", "gas")),
            big_k=float(_need(gas_cfg, "big_k", "gas")),
        )
        damp_cfg = _need(cfg, "damping", "scenario")
        dl = DampingLaw(
            alpha=float(_need(damp_cfg, "alpha", "damping")),
            lam=float(_need(damp_cfg, "lambda", "damping")),
        )
        grid_cfg = _need(cfg, "grid", "scenario")
        grid = Grid(
            n=int(_need(grid_cfg, "n", "grid")),
            length=float(_need(grid_cfg, "L", "grid")),
            x0=float(grid_cfg.get("x0", 0.0)),
        )
        profile = dict(_need(cfg, "profile", "scenario"))
        if profile.get("preset") not in PRESETS:
            raise ConfigError(
                f"profile preset must be one of {PRESETS}, "
                f"got {profile.get('preset')!r}"
            )
        field = init_field(profile, grid, gm, dl)
        run_cfg = dict(cfg.get("run", {}))
        t_end = float(run_cfg.get("t_end", 0.0))
        cfl = float(run_cfg.get("cfl", solver.DEFAULT_CFL))
        if t_end < 0.0:
            raise ConfigError(f"run.t_end must be nonnegative, got {t_end}")
        if t_end > 0.0 and not (0.0 < cfl <= solver.DEFAULT_CFL):
            raise ConfigError(
                f"run.cfl must lie in (0, {solver.DEFAULT_CFL}], got {cfl}"
            )
        tolerances = dict(run_cfg.get("tolerances", {}))
        trace_tol = float(tolerances.get("trace", 0.01))
        if not (0.0 < trace_tol < 1.0):
            raise ConfigError(f"run.tolerances.trace must be in (0,1), got {trace_tol}")
        outputs = dict(cfg.get("outputs", {}))
        trace_req = outputs.get("trace")
        if trace_req is not None:
            direction = str(trace_req.get("direction", "forward")).lower()
            if direction not in ("forward", "backward"):
                raise ConfigError(
                    f"outputs.trace.direction must be forward|backward, "
                    f"got {direction!r}"
                )
            outputs["trace"] = {
                "x_start": float(trace_req.get("x_start", grid.x0)),
                "direction": direction,
            }
    except DomainError as e:
        raise ConfigError(str(e)) from e
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed numeric field: {e}") from e
    return {
        "gas": gm, "damping": dl, "grid": grid, "profile": profile,
        "field": field, "t_end": t_end, "cfl": cfl, "trace_tol": trace_tol,
        "outputs": outputs,
    }


# ---------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------

def verdict_json(verdict: criteria.Verdict) -> str:
    return json.dumps(verdict.to_dict(), sort_keys=True, indent=2) + "\n"


def _flag_char(on_char: str, off_char: str, ok, violation_t, t) -> str:
    if ok is None:
        return "-"
    if violation_t is not None and t >= violation_t:
        return off_char
    return on_char


def monitors_csv(mon: solver.Monitors) -> str:
    """Flags column: three characters (invariant region, ceiling,
    floor); uppercase = holding, lowercase = violated by this time,
    '-' = audit not applicable."""
    lines = [MONITOR_HEADER]
    for i, t in enumerate(mon.ts):
        flags = (
            _flag_char("R", "r", mon.invariant_region_ok, mon.invariant_violation_t, t)
            + _flag_char("C", "c", mon.ceiling_ok, mon.ceiling_violation_t, t)
            + _flag_char("F", "f", mon.floor_ok, mon.floor_violation_t, t)
        )
        lines.append(
            ",".join(
                (
                    _fmt(t), _fmt(mon.max_abs_ux[i]), _fmt(mon.min_rho[i]),
                    _fmt(mon.y_max[i]), _fmt(mon.q_max[i]), flags,
                )
            )
        )
    return "\n".join(lines) + "\n"


def trace_csv(trace: solver.CharTrace, report: solver.CrossValidationReport) -> str:
    scale = float(np.max(np.abs(trace.y_or_q)))
    scale = scale if scale > 0.0 else 1.0
    lines = [TRACE_HEADER]
    for i, t in enumerate(trace.times):
        dev = abs(report.y_integrated[i] - trace.y_or_q[i]) / scale
        lines.append(
            ",".join(
                (
                    _fmt(t), _fmt(trace.xs[i]), _fmt(trace.phi[i]),
                    _fmt(trace.y_or_q[i]), _fmt(report.y_integrated[i]), _fmt(dev),
                )
            )
        )
    return "\n".join(lines) + "\n"


def summary_text(scn: dict, verdict: criteria.Verdict, result) -> str:
    gm, dl = scn["gas"], scn["damping"]
    regime = criteria.classify_regime(gm, dl)
    lines = [
        "scenario summary",
        f"gamma={_fmt(gm.gamma)} big_k={_fmt(gm.big_k)} "
        f"alpha={_fmt(dl.alpha)} lambda={_fmt(dl.lam)}",
        f"regime: {regime.gamma_side.value}/{regime.lambda_side.value} "
        f"theorem={regime.applicable_theorem.value}",
        f"verdict: fired={str(verdict.fired).lower()} "
        f"theorem={verdict.theorem.value}",
    ]
    if result is not None:
        mon = result.monitors
        if result.broke_down:
            rep = result.outcome
            lines.append(
                f"breakdown: t in [{_fmt(rep.t_prev)}, {_fmt(rep.t)}] "
                f"max_abs_ux={_fmt(rep.max_abs_ux)}"
            )
        else:
            lines.append(f"completed: t={_fmt(result.outcome.t)}")
        lines.append(
            "invariant region audit: "
            + ("ok" if mon.invariant_region_ok else
               f"violated at t={_fmt(mon.invariant_violation_t)}")
        )
        if mon.ceiling_ok is not None:
            lines.append(
                "ceiling audit: "
                + ("ok" if mon.ceiling_ok else
                   f"violated at t={_fmt(mon.ceiling_violation_t)}")
            )
        if 1.0 < gm.gamma < 3.0:
            if mon.floor_ok is None:
                lines.append(
                    "density floor audit: not exercised (run ended before t_min)"
                )
            else:
                lines.append(
                    "density floor audit: "
                    + ("ok" if mon.floor_ok else
                       f"violated at t={_fmt(mon.floor_violation_t)}")
                )
    return "\n".join(lines) + "\n"


def _write(out_dir: Path, name: str, text: str):
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text)


# ---------------------------------------------------------------------
# verb implementations
# ---------------------------------------------------------------------

def _evaluate(scn: dict) -> criteria.Verdict:
    return criteria.evaluate(scn["field"], scn["gas"], scn["damping"])


def cmd_validate(args) -> int:
    build_scenario(load_config(args.config))
    print("config ok")
    return EXIT_OK


def cmd_check(args) -> int:
    scn = build_scenario(load_config(args.config))
    verdict = _evaluate(scn)
    text = verdict_json(verdict)
    sys.stdout.write(text)
    if args.out:
        _write(Path(args.out), "verdict.json", text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    scn = build_scenario(load_config(args.config))
    if scn["t_end"] <= 0.0:
        raise ConfigError("simulate requires run.t_end > 0")
    verdict = _evaluate(scn)
    result = solver.run(scn["field"], scn["t_end"], cfl=scn["cfl"])
    outputs = scn["outputs"]
    out_dir = Path(args.out) if args.out else Path(".")
    if outputs.get("verdict", True):
        _write(out_dir, "verdict.json", verdict_json(verdict))
    if outputs.get("monitors", True):
        _write(out_dir, "monitors.csv", monitors_csv(result.monitors))
    trace_req = outputs.get("trace")
    if trace_req:
        direction = (
            solver.Direction.FORWARD
            if trace_req["direction"] == "forward"
            else solver.Direction.BACKWARD
        )
        trace = solver.trace_characteristic(result, trace_req["x_start"], direction)
        report = solver.cross_validate_riccati(
            trace, scn["gas"], scn["damping"], scn["trace_tol"]
        )
        _write(out_dir, "trace.csv", trace_csv(trace, report))
    if outputs.get("snapshots", False):
        out_dir.mkdir(parents=True, exist_ok=True)
        solver.write_snapshots(out_dir / "snapshots.bin", result.snapshots)
    if outputs.get("summary", True):
        _write(out_dir, "summary.txt", summary_text(scn, verdict, result))
    sys.stdout.write(summary_text(scn, verdict, result))
    return EXIT_OK


# ---------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------

_AXIS_NAMES = ("alpha", "lambda", "gamma", "steepness")

SWEEP_HEADER = (
    "regime,theorem,fired,breakdown_observed,breakdown_time_bracket,"
    "floor_violations,error"
)


def _apply_axis(cfg: dict, name: str, value: float) -> None:
    if name == "alpha":
        cfg["damping"]["alpha"] = value
    elif name == "lambda":
        cfg["damping"]["lambda"] = value
    elif name == "gamma":
        cfg["gas"]["gamma"] = value
    elif name == "steepness":
        # scales the profile amplitudes; steepness 1 is the template
        for key in ("u_amp", "tau_amp"):
            if key in cfg["profile"]:
                cfg["profile"][key] = cfg["profile"][key] * value


def _sweep_cell(payload) -> str:
    """One sweep row; never raises, failures land in the error column."""
    cfg, axes, values = payload
    import copy

    cell_cfg = copy.deepcopy(cfg)
    for name, v in zip(axes, values):
        _apply_axis(cell_cfg, name, v)
    prefix = ",".join(_fmt(v) for v in values)
    try:
        scn = build_scenario(cell_cfg)
        gm, dl = scn["gas"], scn["damping"]
        regime = criteria.classify_regime(gm, dl)
        verdict = _evaluate(scn)
        broke, bracket, floor_violations = "false", "", "0"
        if scn["t_end"] > 0.0:
            result = solver.run(scn["field"], scn["t_end"], cfl=scn["cfl"])
            if result.broke_down:
                rep = result.outcome
                broke = "true"
                bracket = f"{_fmt(rep.t_prev)}..{_fmt(rep.t)}"
            mon = result.monitors
            if mon.floor_ok is not None and not mon.floor_ok:
                n_bad = sum(
                    1 for t in mon.ts
                    if mon.floor_violation_t is not None
                    and t >= mon.floor_violation_t
                )
                floor_violations = str(n_bad)
        row = ",".join(
            (
                f"{regime.gamma_side.value}/{regime.lambda_side.value}",
                verdict.theorem.value,
                str(verdict.fired).lower(),
                broke,
                bracket,
                floor_violations,
                "",
            )
        )
    except ShocklineError as e:
        row = ",".join(("", "NONE", "false", "false", "", "0",
                        type(e).__name__))
    return f"{prefix},{row}"


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    sweep_cfg = cfg.pop("sweep", None)
    if not sweep_cfg:
        raise ConfigError("sweep config needs a 'sweep' section")
    axes_cfg = sweep_cfg.get("axes", [])
    if not (1 <= len(axes_cfg) <= 2):
        raise ConfigError("sweep needs one or two axes")
    axes, grids = [], []
    for ax in axes_cfg:
        name = ax.get("name")
        if name not in _AXIS_NAMES:
            raise ConfigError(f"axis name must be one of {_AXIS_NAMES}, got {name!r}")
        count = int(ax.get("count", 0))
        if count < 1:
            raise ConfigError("axis count must be at least 1")
        axes.append(name)
        grids.append(
            np.linspace(float(ax["start"]), float(ax["stop"]), count)
        )
    budget = int(sweep_cfg.get("budget", SWEEP_BUDGET_DEFAULT))
    n_cells = int(np.prod([len(g) for g in grids]))
    if n_cells > budget:
        raise ConfigError(f"sweep has {n_cells} cells, budget is {budget}")

    cells = []
    if len(grids) == 1:
        for v in grids[0]:
            cells.append((cfg, tuple(axes), (float(v),)))
    else:
        for v0 in grids[0]:
            for v1 in grids[1]:
                cells.append((cfg, tuple(axes), (float(v0), float(v1))))

    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]

    header = ",".join(axes) + "," + SWEEP_HEADER
    text = header + "\n" + "\n".join(rows) + "\n"
    if args.out:
        _write(Path(args.out), "sweep.csv", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------

def _error_json(exc: Exception) -> str:
    return json.dumps(
        {"error": type(exc).__name__, "message": str(exc)}, sort_keys=True
    ) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shockline",
        description="Blow-up analysis toolkit for damped Lagrangian gas dynamics",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, fn in (
        ("check", cmd_check),
        ("simulate", cmd_simulate),
        ("sweep", cmd_sweep),
        ("validate", cmd_validate),
    ):
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; current presets are deterministic")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("SHOCKLINE_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, RegimeError) as e:
        sys.stderr.write(_error_json(e))
        return EXIT_CONFIG
    except (VacuumError, ToleranceError, RangeError, TraceError, OSError) as e:
        sys.stderr.write(_error_json(e))
        return EXIT_RUNTIME
    except ShocklineError as e:
        sys.stderr.write(_error_json(e))
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
