"""Command-line front end: simulate, analyze, estimate, synth.

Every command writes byte-reproducible artifacts (no timestamps, sorted JSON
keys, fixed float formatting) so reruns with identical inputs produce
identical files.  Exit codes: 0 success, 1 usage or input error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .data import Dataset, SpeciesMap, ingest, synthesize
from .equilibria import all_equilibria, interior_poly_crosscheck
from .errors import (
    ConstantColumn,
    IntegrationFailed,
    LineSearchFailed,
    MaskViolation,
    MissingColumn,
    MultipleRoots,
    NonFiniteLoss,
    NonNumericCell,
    NoRoot,
    TooFewSamples,
    UnmappedSpecies,
)
from .model import ModelParams, State, Subsystem
from .pinn import estimate as run_estimate
from .solver import SolverConfig, integrate
from .stability import classify

_USAGE_ERRORS = (
    ValueError,
    OSError,
    TooFewSamples,
    MissingColumn,
    NonNumericCell,
    UnmappedSpecies,
    ConstantColumn,
    MaskViolation,
)
_NUMERICAL_ERRORS = (IntegrationFailed, NoRoot, MultipleRoots, NonFiniteLoss, LineSearchFailed)

_SPECIES = ("prey", "predator", "scavenger")
_COLORS = ("#1f77b4", "#d62728", "#2ca02c")
_MAX_PLOT_POINTS = 1200


# ---------------------------------------------------------------- plotting

def _svg_document(width, height, body) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">\n'
        '<rect width="100%" height="100%" fill="white"/>\n'
        f"{body}</svg>\n"
    )


def _thin(arr):
    n = len(arr)
    if n <= _MAX_PLOT_POINTS:
        return np.asarray(arr)
    stride = -(-n // _MAX_PLOT_POINTS)
    thinned = list(arr[::stride])
    if (n - 1) % stride:
        thinned.append(arr[-1])
    return np.asarray(thinned)


def _panel(curves, left, top, width, height, title, xlabel, ylabel) -> str:
    """One framed plot; curves are (label, color, dash, xs, ys) tuples."""
    xs_all = np.concatenate([c[3] for c in curves])
    ys_all = np.concatenate([c[4] for c in curves])
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 - x0 <= 0:
        x1 = x0 + 1.0
    if y1 - y0 <= 0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    px = lambda v: left + (v - x0) / (x1 - x0) * width
    py = lambda v: top + height - (v - y0) / (y1 - y0) * height
    parts = [
        f'<rect x="{left}" y="{top}" width="{width}" height="{height}" '
        'fill="none" stroke="#888"/>',
        f'<text x="{left + width / 2:.1f}" y="{top - 8}" text-anchor="middle">{title}</text>',
        f'<text x="{left + width / 2:.1f}" y="{top + height + 28}" text-anchor="middle">{xlabel}</text>',
        f'<text x="{left - 8}" y="{top - 8}" text-anchor="start">{ylabel}</text>',
        f'<text x="{left}" y="{top + height + 14}" text-anchor="middle">{x0:.3g}</text>',
        f'<text x="{left + width}" y="{top + height + 14}" text-anchor="middle">{x1:.3g}</text>',
        f'<text x="{left - 4}" y="{top + height:.1f}" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{left - 4}" y="{top + 10}" text-anchor="end">{y1:.3g}</text>',
    ]
    for li, (label, color, dash, xs, ys) in enumerate(curves):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{pts}"/>'
        )
        lx = left + width - 150
        ly = top + 14 + 14 * li
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}"{dash_attr} stroke-width="1.5"/>')
        parts.append(f'<text x="{lx + 24}" y="{ly}">{label}</text>')
    return "\n".join(parts) + "\n"


def _timeseries_svg(times, states) -> str:
    times = _thin(times)
    curves = [
        (name, color, None, times, _thin(states[:, idx]))
        for idx, (name, color) in enumerate(zip(_SPECIES, _COLORS))
    ]
    body = _panel(curves, 60, 30, 540, 300, "populations over time", "t", "population")
    return _svg_document(660, 380, body)


def _phase_svg(states) -> str:
    x = _thin(states[:, 0])
    y = _thin(states[:, 1])
    z = _thin(states[:, 2])
    left = _panel([("orbit", "#1f77b4", None, x, y)], 60, 30, 280, 280,
                  "prey vs predator", "prey", "predator")
    right = _panel([("orbit", "#2ca02c", None, x, z)], 420, 30, 280, 280,
                   "prey vs scavenger", "prey", "scavenger")
    return _svg_document(760, 370, left + right)


def _fit_svg(ds: Dataset, fitted_times, fitted_states) -> str:
    curves = []
    for idx, (name, color) in enumerate(zip(_SPECIES, _COLORS)):
        curves.append((f"{name} data", color, "4 3", ds.times, ds.observations[:, idx]))
        curves.append((f"{name} fit", color, None, _thin(fitted_times), _thin(fitted_states[:, idx])))
    body = _panel(curves, 60, 30, 540, 300, "observed vs fitted (normalized)",
                  "normalized time", "normalized population")
    return _svg_document(660, 380, body)


# ---------------------------------------------------------------- helpers

def _parse_state(text) -> State:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--s0 expects 'x,y,z', got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"--s0 expects three numbers, got {text!r}") from None
    return State(*vals)


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _write(path, text) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {path}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):  # bool subclasses int, check first
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


# ---------------------------------------------------------------- commands

def cmd_simulate(args) -> int:
    p = ModelParams.load(args.params)
    s0 = _parse_state(args.s0)
    mask = Subsystem.parse(args.subsystem)
    cfg = SolverConfig(
        t_end=args.t_end,
        method=args.method,
        step=args.step,
        abs_tol=args.tol,
        rel_tol=args.tol,
        negativity_policy="clamp" if args.clamp else "diagnose",
    )
    traj = integrate(p, s0, cfg, mask=mask)
    out = _outdir(args)
    csv_path = os.path.join(out, "trajectory.csv")
    traj.to_csv(csv_path)
    print(f"wrote {csv_path}")
    states = np.asarray(traj.states)
    _write(os.path.join(out, "timeseries.svg"), _timeseries_svg(np.asarray(traj.times), states))
    _write(os.path.join(out, "phase.svg"), _phase_svg(states))
    fin = traj.final_state
    print(
        f"final state t={fin.t:g}: x={fin.x:.6g} y={fin.y:.6g} z={fin.z:.6g} "
        f"({traj.diagnostics.steps} steps, min component {traj.diagnostics.min_component:.3g})"
    )
    return 0


def cmd_analyze(args) -> int:
    p = ModelParams.load(args.params)
    points = all_equilibria(p)
    entries = []
    flagged = False
    print(f"{'label':10s} {'point':-^42s} {'exists':6s} verdict")
    for eq in points:
        rec = eq.record()
        if eq.flag == "multiple_roots":
            flagged = True
        if eq.exists:
            verdict = classify(p, eq)
            rec["stability"] = verdict.record()
            shown = verdict.classification
        else:
            rec["stability"] = None
            shown = "-"
        pt = "-" if eq.point is None else "(" + ", ".join(f"{v:.6g}" for v in eq.point) + ")"
        print(f"{eq.label:10s} {pt:42s} {str(eq.exists):6s} {shown}")
        for chk in eq.existence:
            print(f"{'':10s}   exists: {chk.name} = {chk.value:.6g} -> {chk.satisfied}")
        if rec["stability"]:
            for chk in rec["stability"]["criteria"]:
                print(f"{'':10s}   stable: {chk['name']} = {chk['value']:.6g} -> {chk['satisfied']}")
            for note in rec["stability"]["notes"]:
                print(f"{'':10s}   note: {note}")
        entries.append(rec)
    report = {
        "parameters": p.to_dict(),
        "equilibria": entries,
        "interior_crosscheck": _jsonable(interior_poly_crosscheck(p)),
    }
    out = _outdir(args)
    _write(os.path.join(out, "equilibria.json"), json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n")
    if flagged:
        print("interior solve found multiple roots; see report", file=sys.stderr)
        return 2
    return 0


def cmd_estimate(args) -> int:
    if args.species_map:
        smap = SpeciesMap.load(args.species_map)
        ds = ingest(args.dataset, smap)
    else:
        ds = Dataset.from_csv(args.dataset)
    report = run_estimate(ds, args.seed, epochs=args.epochs, bfgs_iterations=args.bfgs_iterations)
    out = _outdir(args)
    _write(os.path.join(out, "report.json"), report.to_json())
    trace_path = os.path.join(out, "trace.csv")
    report.write_trace_csv(trace_path)
    print(f"wrote {trace_path}")
    if math.isfinite(report.final_mse):
        p = ModelParams.from_array(report.final_params)
        raw = ds.raw_times
        dense = np.linspace(raw[0], raw[-1], 201)
        s0 = ds.mins + ds.observations[0] * ds.ranges
        cfg = SolverConfig(t_end=float(dense[-1]), abs_tol=1e-9, rel_tol=1e-9,
                           negativity_policy="clamp")
        try:
            traj = integrate(p, State(float(s0[0]), float(s0[1]), float(s0[2]), float(dense[0])),
                             cfg, t_eval=dense)
        except IntegrationFailed:
            traj = None
        if traj is not None:
            tn = (np.asarray(traj.times) - raw[0]) / (raw[-1] - raw[0])
            sn = (np.asarray(traj.states) - ds.mins) / ds.ranges
            _write(os.path.join(out, "fit.svg"), _fit_svg(ds, tn, sn))
    print(
        f"seed {report.seed}: post-network MSE {report.post_nn_mse:.6g}, "
        f"final MSE {report.final_mse:.6g}, final PIE {report.final_pie:.6g}"
    )
    for err in report.stage_errors:
        print(f"stage error: {err}", file=sys.stderr)
    if not math.isfinite(report.final_mse):
        return 2
    return 0


def cmd_synth(args) -> int:
    p = ModelParams.load(args.params)
    s0 = _parse_state(args.s0)
    grid = np.linspace(args.t_start, args.t_end, args.points)
    ds = synthesize(p, s0, grid, noise_sigma=args.noise, seed=args.seed)
    out = _outdir(args)
    csv_path = os.path.join(out, "dataset.csv")
    ds.to_csv(csv_path)
    print(f"wrote {csv_path}")
    print(f"{ds.sample_count} rows on t in [{args.t_start:g}, {args.t_end:g}], noise sigma {args.noise:g}")
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppsdyn",
        description="predator-prey-scavenger dynamics: simulation, equilibria, estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate the system and plot the trajectory")
    sim.add_argument("--params", required=True, help="parameter file (key = value lines)")
    sim.add_argument("--s0", required=True, help="initial state as 'x,y,z'")
    sim.add_argument("--subsystem", default="full",
                     choices=["full", "predprey", "predscav", "scavprey"])
    sim.add_argument("--t-end", type=float, default=200.0, dest="t_end")
    sim.add_argument("--method", default="rk45", choices=["rk45", "rk4"])
    sim.add_argument("--step", type=float, default=None, help="fixed step (rk4 only)")
    sim.add_argument("--tol", type=float, default=1e-9, help="absolute and relative tolerance")
    sim.add_argument("--clamp", action="store_true",
                     help="clamp negative components to zero instead of recording them")
    sim.add_argument("--out", default=".", help="output directory")
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analyze", help="enumerate steady states and classify stability")
    ana.add_argument("--params", required=True)
    ana.add_argument("--out", default=".")
    ana.set_defaults(func=cmd_analyze)

    est = sub.add_parser("estimate", help="fit parameters to a dataset")
    est.add_argument("--dataset", required=True,
                     help="normalized dataset CSV (with .provenance.json sidecar), "
                          "or a raw species CSV when --species-map is given")
    est.add_argument("--species-map", default=None, dest="species_map",
                     help="JSON file mapping species columns to prey/predator/scavenger")
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--epochs", type=int, default=100)
    est.add_argument("--bfgs-iterations", type=int, default=200, dest="bfgs_iterations")
    est.add_argument("--out", default=".")
    est.set_defaults(func=cmd_estimate)

    syn = sub.add_parser("synth", help="generate a synthetic dataset")
    syn.add_argument("--params", required=True)
    syn.add_argument("--s0", required=True)
    syn.add_argument("--t-start", type=float, default=0.0, dest="t_start")
    syn.add_argument("--t-end", type=float, required=True, dest="t_end")
    syn.add_argument("--points", type=int, default=40)
    syn.add_argument("--noise", type=float, default=0.0)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--out", default=".")
    syn.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
