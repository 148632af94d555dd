"""Command-line front end.

Every subcommand writes one JSON object (``config``, ``results``, ``version``)
or an RFC 4180 CSV table.  Exit codes: 0 success, 2 bad arguments,
3 enumeration/tree limit exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from importlib import resources

import numpy as np

from . import __version__
from .faultcircuits import run_fig2, run_fig3, teleport_once, outcome_correction
from .infocomplexity import (
    DEFAULT_BUDGET_BITS,
    Distribution,
    PrecisionModel,
    differential_entropy,
    multiplier_gate_complexity,
    precision_entropy,
    purity,
    rotation_gate_complexity,
    von_neumann_entropy,
)
from .qcore import StateVector, equal_up_to_global_phase, schmidt_rank
from .recovery import (
    DEFAULT_EXACT_PASSES,
    DEFAULT_MC_PASSES,
    ORACLE_MAX_STEPS,
    EnumerationLimitError,
    exact_recovery_distribution,
    first_passage_oracle,
    monte_carlo_recovery,
    series_distribution,
)

EXIT_USAGE = 2
EXIT_LIMIT = 3

ENTROPY_COLUMNS = [
    "kind", "k", "a", "lo", "hi", "delta_in", "delta_out",
    "differential_entropy", "precision_entropy",
    "h_in", "h_out", "control_entropy", "precision_term", "feasible",
]
RECOVER_COLUMNS = ["pass", "probability", "cumulative", "exact", "stderr"]
SWEEP_COLUMNS = [
    "theta_deg", "theta_rad", "purity", "von_neumann_entropy",
    "locally_correctable", "pass1_recovery",
]
STATE_COLUMNS = ["quantity", "i", "j", "re", "im"]

RECOVER_MODELS = ("series", "oracle", "exact-born", "mc-idealized", "mc-born")


class UsageError(Exception):
    pass


def schema() -> dict:
    """The JSON schema every ``--format json`` output validates against."""
    text = resources.files("gatecomplexity").joinpath("schema/results.schema.json").read_text()
    return json.loads(text)


# -- argument handling -------------------------------------------------------


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--theta", type=float, help="gate angle (degrees unless --radians)")
    p.add_argument("--radians", action="store_true", help="read angles as radians")
    p.add_argument("--alpha2", type=float, default=0.5, help="|alpha|^2 of the input qubit")
    p.add_argument("--phase", type=float, default=0.0, help="arg(beta/alpha), same unit as --theta")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--model", choices=RECOVER_MODELS, default="series")
    p.add_argument("--passes", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--budget-bits", type=float, default=DEFAULT_BUDGET_BITS)
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="gatecomplexity",
        description="Stuck-gate circuits, gate entropy and teleportation recovery.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    entropy = sub.add_parser("entropy", parents=[shared], help="control entropy of gates")
    entropy.add_argument("--k", type=float, action="append", help="multiplier constant (repeatable)")
    entropy.add_argument("--a", type=float, default=1.0, help="input range (0, a)")
    entropy.add_argument("--rotation", action="store_true", help="add the fixed-rotation gate row")
    entropy.add_argument("--uniform", metavar="LO,HI", help="uniform source distribution")
    entropy.add_argument("--delta-in", type=float, default=1.0)
    entropy.add_argument("--delta-out", type=float, default=1.0)

    sub.add_parser("fig2", parents=[shared], help="stuck gate on the upper wire")
    sub.add_parser("fig3", parents=[shared], help="stuck gate on the lower wire")
    sub.add_parser("teleport", parents=[shared], help="one teleportation pass")
    sub.add_parser("recover", parents=[shared], help="per-pass recovery distribution")
    sweep = sub.add_parser("sweep", parents=[shared], help="purity and recovery over an angle grid")
    sweep.add_argument("--grid", required=True, metavar="LO:HI:STEP")
    return parser


def _angle(value: float, args) -> float:
    return value if args.radians else math.radians(value)


def _theta(args) -> float:
    if args.theta is None:
        raise UsageError("--theta is required")
    return _angle(args.theta, args)


def _amplitudes(args) -> tuple[complex, complex]:
    if not 0 <= args.alpha2 <= 1:
        raise UsageError("--alpha2 must lie in [0, 1]")
    alpha = math.sqrt(args.alpha2)
    beta = math.sqrt(1 - args.alpha2) * complex(math.cos(_angle(args.phase, args)),
                                                math.sin(_angle(args.phase, args)))
    return complex(alpha), beta


def _config(args) -> dict:
    # worker count and output path never change results, so they are not echoed
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "workers")}


# -- serialization -----------------------------------------------------------


def _jsonable(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, complex):
        return [_jsonable(value.real), _jsonable(value.imag)]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g") if math.isfinite(value) else ""
    return str(value)


def render(config: dict, results: dict, fmt: str) -> str:
    if fmt == "json":
        results = {k: v for k, v in results.items() if k != "_csv"}
        doc = {"config": _jsonable(config), "results": _jsonable(results), "version": __version__}
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    columns, rows = results["_csv"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _state_rows(name: str, state: StateVector | None) -> list[dict]:
    if state is None:
        return []
    return [{"quantity": name, "i": i, "re": complex(a).real, "im": complex(a).imag}
            for i, a in enumerate(state.amplitudes)]


def _matrix_rows(name: str, m: np.ndarray) -> list[dict]:
    return [{"quantity": name, "i": i, "j": j, "re": m[i, j].real, "im": m[i, j].imag}
            for i in range(m.shape[0]) for j in range(m.shape[1])]


def _scalar_row(name: str, value) -> dict:
    return {"quantity": name, "re": float(value)}


# -- subcommands -------------------------------------------------------------


def cmd_entropy(args) -> dict:
    try:
        prec = PrecisionModel(args.delta_in, args.delta_out)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    for k in args.k or []:
        if not (k > 0 and args.a > 0):
            raise UsageError("--k and --a must be positive")
        r = multiplier_gate_complexity(k, args.a, prec, args.budget_bits)
        rows.append({"kind": "multiplier", "k": k, "a": args.a, **_report_fields(r, prec)})
    if args.rotation:
        r = rotation_gate_complexity(args.a, prec, args.budget_bits)
        rows.append({"kind": "rotation", "a": args.a, **_report_fields(r, prec)})
    if args.uniform:
        try:
            lo, hi = (float(v) for v in args.uniform.split(","))
            dist = Distribution.uniform(lo, hi)
        except ValueError as exc:
            raise UsageError(f"--uniform expects LO,HI with LO < HI: {exc}") from exc
        rows.append({
            "kind": "source", "lo": lo, "hi": hi,
            "delta_in": prec.delta_in, "delta_out": prec.delta_out,
            "differential_entropy": differential_entropy(dist),
            "precision_entropy": precision_entropy(dist, prec.delta_in),
        })
    if not rows:
        raise UsageError("give at least one of --k, --rotation, --uniform")
    return {"rows": rows, "_csv": (ENTROPY_COLUMNS, rows)}


def _report_fields(report, prec) -> dict:
    return {
        "delta_in": prec.delta_in, "delta_out": prec.delta_out,
        "h_in": report.h_in, "h_out": report.h_out,
        "control_entropy": report.control_entropy,
        "precision_term": report.precision_term, "feasible": report.feasible,
    }


def cmd_fig2(args) -> dict:
    theta = _theta(args)
    r = run_fig2(theta)
    reference = StateVector(np.array([1, -1]))
    results = {
        "theta_rad": theta,
        "joint_state": r.joint_state.amplitudes,
        "upper_state": r.upper_state.amplitudes,
        "corrected_upper": r.corrected_upper.amplitudes,
        "corrected_matches_reference": equal_up_to_global_phase(r.corrected_upper, reference),
        "schmidt_rank": schmidt_rank(r.joint_state, 1),
    }
    rows = (_state_rows("joint_state", r.joint_state) + _state_rows("upper_state", r.upper_state)
            + _state_rows("corrected_upper", r.corrected_upper))
    return {**results, "_csv": (STATE_COLUMNS, rows)}


def cmd_fig3(args) -> dict:
    theta = _theta(args)
    r = run_fig3(theta)
    p, s = purity(r.rho_a), von_neumann_entropy(r.rho_a)
    results = {
        "theta_rad": theta,
        "joint_state": r.joint_state.amplitudes,
        "rho_ab": r.rho_ab.entries,
        "rho_a": r.rho_a.entries,
        "purity": p,
        "von_neumann_entropy": s,
        "locally_correctable": r.locally_correctable,
        "schmidt_rank": schmidt_rank(r.joint_state, 1),
    }
    rows = (_state_rows("joint_state", r.joint_state) + _matrix_rows("rho_ab", r.rho_ab.entries)
            + _matrix_rows("rho_a", r.rho_a.entries)
            + [_scalar_row("purity", p), _scalar_row("von_neumann_entropy", s),
               _scalar_row("locally_correctable", r.locally_correctable)])
    return {**results, "_csv": (STATE_COLUMNS, rows)}


def cmd_teleport(args) -> dict:
    theta = _theta(args)
    alpha, beta = _amplitudes(args)
    r = teleport_once(alpha, beta, theta)
    branches = []
    rows = _state_rows("premeasure_state", r.premeasure_state)
    for b, out in zip(r.branches, r.outputs):
        corrected = outcome_correction(b.outcome, out) if out is not None else None
        branches.append({
            "outcome": b.outcome,
            "probability": b.probability,
            "receiver_state": None if out is None else out.amplitudes,
            "corrected_state": None if corrected is None else corrected.amplitudes,
        })
        rows.append(_scalar_row(f"probability_{b.outcome}", b.probability))
        rows += _state_rows(f"receiver_state_{b.outcome}", out)
    results = {"theta_rad": theta, "premeasure_state": r.premeasure_state.amplitudes,
               "branches": branches}
    return {**results, "_csv": (STATE_COLUMNS, rows)}


def cmd_recover(args) -> dict:
    passes = args.passes
    if passes is not None and passes < 1:
        raise UsageError("--passes must be >= 1")
    model = args.model
    if model == "series":
        dist = series_distribution(passes or 10)
    elif model == "oracle":
        passes = passes or 5
        if 2 * passes > ORACLE_MAX_STEPS:
            raise EnumerationLimitError(
                f"oracle enumeration covers at most {ORACLE_MAX_STEPS // 2} passes")
        dist = first_passage_oracle(2 * passes)
    else:
        theta = _theta(args)
        alpha, beta = _amplitudes(args)
        if model == "exact-born":
            dist = exact_recovery_distribution(alpha, beta, theta, passes or DEFAULT_EXACT_PASSES)
        else:
            if args.trials < 1:
                raise UsageError("--trials must be >= 1")
            sampling = "idealized" if model == "mc-idealized" else "exact_born"
            dist = monte_carlo_recovery(alpha, beta, theta, args.trials, args.seed, sampling,
                                        passes or DEFAULT_MC_PASSES, args.workers)
    rows = []
    for n, (p, c) in enumerate(zip(dist.per_pass, dist.cumulative), start=1):
        rows.append({
            "pass": n,
            "probability": float(p),
            "cumulative": float(c),
            "exact": str(p) if isinstance(p, Fraction) else None,
            "stderr": dist.stderr[n - 1] if dist.stderr else None,
        })
    return {
        "model": dist.model,
        "sampling": dist.sampling,
        "trials": dist.trials,
        "seed": dist.seed,
        "censored": float(dist.censored),
        "rows": rows,
        "_csv": (RECOVER_COLUMNS, rows),
    }


def parse_grid(spec: str) -> list[float]:
    """``"lo:hi:step"`` -> ``[lo, lo+step, ...]`` with ``floor((hi-lo)/step)+1`` points."""
    try:
        lo, hi, step = (float(v) for v in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"--grid expects LO:HI:STEP, got {spec!r}") from exc
    if not step > 0 or hi < lo:
        raise UsageError("--grid needs STEP > 0 and HI >= LO (the grid is empty)")
    count = math.floor((hi - lo) / step + 1e-9) + 1
    return [lo + i * step for i in range(count)]


def cmd_sweep(args) -> dict:
    alpha, beta = _amplitudes(args)
    rows = []
    for value in parse_grid(args.grid):
        theta = _angle(value, args)
        r = run_fig3(theta)
        rec = exact_recovery_distribution(alpha, beta, theta, 1)
        rows.append({
            "theta_deg": math.degrees(theta),
            "theta_rad": theta,
            "purity": purity(r.rho_a),
            "von_neumann_entropy": von_neumann_entropy(r.rho_a),
            "locally_correctable": r.locally_correctable,
            "pass1_recovery": rec.per_pass[0],
        })
    return {"rows": rows, "_csv": (SWEEP_COLUMNS, rows)}


COMMANDS = {
    "entropy": cmd_entropy,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "teleport": cmd_teleport,
    "recover": cmd_recover,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        results = COMMANDS[args.command](args)
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(_config(args), results, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
