"""Command-line entry points; tables go out as CSV, single reports as JSON.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical-contract violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from typing import Any, Callable, Sequence

import jsonschema
import numpy as np

from . import jaynes_cummings as jc
from . import physical
from .locc import classical_decomposition, random_realizations, realize_dynamics_pair
from .qubit_gravity import TwoQubitProtocol, dynamics_pair
from .sdp import build_witness_sdp, solve_sdp, sweep, verify_solution
from .witness import (
    WitnessOperators,
    analytical_witness,
    certify_witness,
    closed_form_witness,
    correlators,
)

log = logging.getLogger("gravwitness")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

TWO_QUBIT_COLUMNS = ["theta", "c_z1", "c_xx2", "c_zz2", "w_analytical", "closed_form_w", "certificate_valid"]
SDP_COLUMNS = ["theta", "w_star", "status", "iterations", "primal_res", "dual_res", "feasible"]
JC_COLUMNS = ["g", "delta", "w_measured", "w_closed_form", "discrepancy"]


class UsageError(Exception):
    pass


class NumericalContractError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- config schemas -----------------------------------------------------------------

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_COMMON = {
    "out": {"type": "string"},
    "seed": {"type": "integer", "minimum": 0},
    "tol": _POS,
    "workers": {"type": "integer", "minimum": 1},
}
_GRID = {
    "theta": {"type": "array", "items": _NUM},
    "theta_min": _NUM,
    "theta_max": _NUM,
    "theta_steps": {"type": "integer", "minimum": 0},
}


def _schema(props: dict) -> dict:
    return {"type": "object", "properties": {**_COMMON, **props}, "additionalProperties": False}


SCHEMAS: dict[str, dict] = {
    "two-qubit": _schema({**_GRID, "lam": _POS}),
    "sdp-sweep": _schema({**_GRID, "max_iter": {"type": "integer", "minimum": 1}, "plain": {"type": "boolean"}}),
    "jc": _schema({
        "g": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "delta": {"type": "array", "items": _NUM},
        "quadratic": {"type": "boolean"},
    }),
    "estimate": _schema({
        "setup": {"enum": ["qubit-qubit", "oscillator"]},
        "qubit_qubit": {
            "type": "object",
            "properties": {"M": _POS, "m": _POS, "delta_X": _POS, "delta_x": _POS, "d": {"type": "number", "minimum": 0}},
            "additionalProperties": False,
        },
        "oscillator": {
            "type": "object",
            "properties": {"M": _POS, "frequency": _POS, "gap_l": {"type": "number", "minimum": 0}, "gap_r": _POS,
                           "density": _POS},
            "additionalProperties": False,
        },
        "target": _POS,
        "tau": _POS,
    }),
    "locc-check": _schema({
        "count": {"type": "integer", "minimum": 1},
        "sdp": {"type": "boolean"},
        "memory_dim": {"type": "integer", "minimum": 1},
    }),
}


def load_config(path: str, command: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    validator = jsonschema.Draft7Validator(SCHEMAS[command])
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"  /{'/'.join(str(p) for p in e.absolute_path)}: {e.message}" for e in errors]
        raise UsageError(f"config {path} failed validation:\n" + "\n".join(lines))
    return cfg


def _merge(args: argparse.Namespace, defaults: dict) -> dict:
    """Defaults < config file < explicit flags."""
    params = dict(defaults)
    if args.config:
        params.update(load_config(args.config, args.command))
    for key, val in vars(args).items():
        if key in ("command", "config", "func") or val is None:
            continue
        params[key] = val
    return params


# -- output -------------------------------------------------------------------------


def fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x) + 0.0, ".17g")
    return str(x)


def write_csv(rows: Sequence[Sequence[Any]], header: Sequence[str], out: str | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    _emit(buf.getvalue(), out)
    return buf.getvalue()


def write_json(report: dict, out: str | None) -> str:
    text = json.dumps(report, indent=2, default=float) + "\n"
    _emit(text, out)
    return text


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pool_map(fn: Callable, items: list, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def theta_grid(p: dict) -> list[float]:
    if p.get("theta") is not None:
        grid = [float(t) for t in p["theta"]]
    else:
        steps = int(p["theta_steps"])
        grid = list(np.linspace(p["theta_min"], p["theta_max"], steps)) if steps else []
    if not grid:
        raise UsageError("theta grid is empty")
    if not all(math.isfinite(t) for t in grid):
        raise UsageError("theta grid contains non-finite values")
    return grid


# -- commands -----------------------------------------------------------------------


def _two_qubit_row(args) -> list:
    theta, lam, tol = args
    pair = dynamics_pair(TwoQubitProtocol(theta))
    c = correlators(pair)
    w = analytical_witness(c, lam)
    cert = certify_witness(WitnessOperators.analytical(lam), tol=tol)
    return [theta, c.c_z1, c.c_xx2, c.c_zz2, w, closed_form_witness(theta, lam), cert.valid]


def cmd_two_qubit(p: dict) -> int:
    grid = theta_grid(p)
    rows = _pool_map(_two_qubit_row, [(t, p["lam"], p["tol"]) for t in grid], p["workers"])
    write_csv(rows, TWO_QUBIT_COLUMNS, p.get("out"))
    gap = max(abs(r[4] - r[5]) for r in rows)
    if gap > 1e-9 or not all(r[6] for r in rows):
        raise NumericalContractError(f"closed-form mismatch {gap:.2e} or invalid certificate")
    return EXIT_OK


def cmd_sdp_sweep(p: dict) -> int:
    grid = theta_grid(p)
    rows = sweep(grid, tol=p["tol"], max_iter=p["max_iter"], workers=p["workers"], tp_slack=not p["plain"])
    write_csv([[getattr(r, c) for c in SDP_COLUMNS] for r in rows], SDP_COLUMNS, p.get("out"))
    warnings = sum(1 for r in rows if r.status != "optimal" or not r.feasible)
    if warnings:
        print(f"warning: {warnings} of {len(rows)} points did not converge or failed verification",
              file=sys.stderr)
    return EXIT_OK


def _jc_row(args) -> list:
    g, delta, quadratic = args
    try:
        rep = jc.jc_witness_report(g, delta)
        row = [g, delta, rep.measured, rep.closed_form, rep.discrepancy]
    except ValueError as exc:
        log.warning("rejected (g=%g, delta=%g): %s", g, delta, exc)
        row = [g, delta, math.nan, math.nan, math.nan]
    if quadratic:
        row.append(jc.vacuum_witness_quadratic(g, delta) if delta != 0 else math.nan)
    return row


def cmd_jc(p: dict) -> int:
    if not p["g"] or not p["delta"]:
        raise UsageError("g and delta grids must be nonempty")
    points = [(float(g), float(d), p["quadratic"]) for g in p["g"] for d in p["delta"]]
    rows = _pool_map(_jc_row, points, p["workers"])
    header = JC_COLUMNS + (["w_quadratic"] if p["quadratic"] else [])
    write_csv(rows, header, p.get("out"))
    rejected = sum(1 for r in rows if math.isnan(r[4]))
    worst = max((r[4] for r in rows if not math.isnan(r[4])), default=0.0)
    if worst > p["tol"]:
        raise NumericalContractError(f"witness discrepancy {worst:.2e} exceeds {p['tol']:.1e}")
    if rejected:
        print(f"warning: {rejected} degenerate grid point(s) rejected", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_estimate(p: dict) -> int:
    try:
        if p["setup"] == "qubit-qubit":
            setup = physical.QubitQubitSetup(**{**asdict(physical.BENCHMARK_QUBIT_QUBIT), **p.get("qubit_qubit", {})})
            g = physical.qubit_qubit_coupling(setup)
            report = {"setup": "qubit-qubit", "inputs": asdict(setup), "g": g,
                      "tau_min": physical.min_negative_time(g)}
        else:
            setup = physical.QubitOscillatorSetup(**{**asdict(physical.BENCHMARK_OSCILLATOR), **p.get("oscillator", {})})
            g = physical.coupling_for_witness(p["target"], p["tau"])
            report = {
                "setup": "oscillator",
                "inputs": {**{k: v for k, v in asdict(setup).items() if k != "m"}, "target": p["target"], "tau": p["tau"]},
                "radius": setup.radius,
                "d_l": setup.d_l,
                "d_r": setup.d_r,
                "g": g,
                "delta": physical.detuning_for(g, p["tau"]),
                "required_mass": physical.required_probe_mass(setup, p["target"], p["tau"]),
            }
    except ValueError as exc:
        raise UsageError(f"invalid setup: {exc}") from exc
    write_json(report, p.get("out"))
    return EXIT_OK


def locc_summary(seed: int, count: int, run_sdp: bool = False, memory_dim: int = 2) -> dict:
    witness = WitnessOperators.analytical(1.0 / 8.0)
    values, sdp_values = [], []
    for sep in random_realizations(seed, count, memory_dim=memory_dim):
        pair = realize_dynamics_pair(classical_decomposition(sep))
        values.append(witness.value(pair))
        if run_sdp:
            prob = build_witness_sdp(pair)
            sol = solve_sdp(prob)
            if verify_solution(prob, sol).feasible:
                sdp_values.append(sol.objective)
    out = {"seed": seed, "instances": count, "min_witness_analytical": min(values)}
    if run_sdp:
        out["min_witness_sdp"] = min(sdp_values) if sdp_values else None
        out["sdp_verified"] = len(sdp_values)
    return out


def cmd_locc_check(p: dict) -> int:
    summary = locc_summary(p["seed"], p["count"], p["sdp"], p["memory_dim"])
    observed = [v for k, v in summary.items() if k.startswith("min_witness") and v is not None]
    summary["passed"] = min(observed) >= -p["tol"]
    write_json(summary, p.get("out"))
    if not summary["passed"]:
        raise NumericalContractError(f"classical-memory instance scored {min(observed):.3e}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

DEFAULTS = {
    "two-qubit": {"theta_min": 0.0, "theta_max": np.pi / 2, "theta_steps": 50, "lam": 1.0, "tol": 1e-10},
    "sdp-sweep": {"theta_min": 0.15, "theta_max": 1.40, "theta_steps": 26, "tol": 1e-8, "max_iter": 50000,
                  "plain": False},
    "jc": {"g": [0.5], "delta": [1.0], "quadratic": False, "tol": 1e-7},
    "estimate": {"setup": "qubit-qubit", "target": 1e-6, "tau": 100.0},
    "locc-check": {"seed": 42, "count": 50, "sdp": False, "memory_dim": 2, "tol": 1e-7},
}

COMMANDS = {
    "two-qubit": cmd_two_qubit,
    "sdp-sweep": cmd_sdp_sweep,
    "jc": cmd_jc,
    "estimate": cmd_estimate,
    "locc-check": cmd_locc_check,
}


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--workers", type=int)


def _add_grid(sp: argparse.ArgumentParser):
    sp.add_argument("--theta", type=float, nargs="+", help="explicit theta = g tau values")
    sp.add_argument("--theta-min", type=float)
    sp.add_argument("--theta-max", type=float)
    sp.add_argument("--theta-steps", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gravwitness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("two-qubit", help="correlators, analytical witness and certificate over a theta grid")
    _add_common(sp)
    _add_grid(sp)
    sp.add_argument("--lam", type=float)

    sp = sub.add_parser("sdp-sweep", help="optimal witness value over a theta grid")
    _add_common(sp)
    _add_grid(sp)
    sp.add_argument("--max-iter", type=int)
    sp.add_argument("--plain", action="store_true", default=None,
                    help="drop the trace-preservation slack terms")

    sp = sub.add_parser("jc", help="qubit-oscillator concurrence witness over (g, delta)")
    _add_common(sp)
    sp.add_argument("--g", type=float, nargs="+")
    sp.add_argument("--delta", type=float, nargs="+")
    sp.add_argument("--quadratic", action="store_true", default=None, help="add the -2 g^2/delta^2 column")

    sp = sub.add_parser("estimate", help="coupling, interaction time and probe-mass estimates")
    _add_common(sp)
    sp.add_argument("--setup", choices=["qubit-qubit", "oscillator"])
    sp.add_argument("--target", type=float, help="target |w| for the oscillator setup")
    sp.add_argument("--tau", type=float, help="interaction time t1 in seconds")

    sp = sub.add_parser("locc-check", help="negative control on random classical-memory dynamics")
    _add_common(sp)
    sp.add_argument("--count", type=int)
    sp.add_argument("--sdp", action="store_true", default=None, help="also solve the witness SDP per instance")
    sp.add_argument("--memory-dim", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        defaults = {"workers": os.cpu_count() or 1, "seed": 0, **DEFAULTS[args.command]}
        params = _merge(args, defaults)
        if params["workers"] < 1:
            raise UsageError("--workers must be at least 1")
        if params.get("count", 1) < 1:
            raise UsageError("--count must be at least 1")
        return COMMANDS[args.command](params)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
