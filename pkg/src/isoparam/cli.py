"""Command-line front end.

Every command emits one report: a metadata block, per-case rows and a
summary. JSON keys are sorted; CSV columns follow the fixed per-command
order in ``COLUMNS`` and metadata is written as leading ``# key=value`` lines.

Exit status: 0 all checks pass, 1 some inequality or bound fails, 2 usage,
file or condition errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from .curve_model import dumps_curve, load_curve, random_convex_curve
from .errors import ConditionNotMet, NotConvexError, SolverError, UndefinedConstantError
from .inequality import (
    PARAM_NAMES,
    PRESET_NAMES,
    check_conditions,
    classical_checks,
    load_params,
    preset,
    verify_chain,
)
from .oracle import cross_check
from .quantities import NUMERICAL_FIELDS, SPECTRAL_FIELDS, full_quantities
from .stability import classify_stability, stability_constants, verify_stability

QUANTITY_COLUMNS = list(SPECTRAL_FIELDS + NUMERICAL_FIELDS)
CLASSICAL = ["isoperimetric", "bonnesen", "bottema", "lemma_l1", "gage"]

COLUMNS = {
    "quantities": ["curve_id", *QUANTITY_COLUMNS, "max_delta", "cross_check_pass"],
    "verify": ["curve_id", "W", "fourier_bound", "uniform_bound", "chain_ok", *CLASSICAL, *QUANTITY_COLUMNS],
    "params": ["name", *PARAM_NAMES, "D", "ok_1_9", "ok_1_11", "ok_1_12", "ok_1_13", "ok_3_2", "C2", "C3",
               "classification"],
    "stability": ["curve_id", "steiner_x", "steiner_y", "steiner_radius", "h1", "h1_sq", "h2_sq", "W", "C2", "C3",
                  "bound_1_14_ok", "bound_1_15_ok", "classification"],
    "scan": ["curve_id", "seed", "W", "fourier_bound", "uniform_bound", "violation", "chain_ok"],
    "presets": ["name", "epsilon", *PARAM_NAMES],
}

DEFAULT_TOL = {"quantities": 1e-9}


class UsageError(Exception):
    pass


def _pkg_version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _resolve_params(args):
    if args.params and args.preset:
        raise UsageError("give either --params or --preset, not both")
    if args.params:
        return load_params(args.params), args.params
    if args.preset:
        return preset(args.preset, args.eps), args.preset
    raise UsageError("this command needs --params PATH or --preset NAME")


def _require_curve(args):
    if not args.curve:
        raise UsageError("this command needs --curve PATH")
    return load_curve(args.curve)


def _qdict(q):
    return {k: getattr(q, k) for k in QUANTITY_COLUMNS}


def cmd_quantities(args):
    curve = _require_curve(args)
    q = full_quantities(curve)
    cc = cross_check(curve, args.tol, args.grid)
    row = {"curve_id": args.curve, **_qdict(q), "max_delta": max(cc.deltas.values()), "cross_check_pass": cc.passed}
    return [row], {"deltas": cc.deltas, "all_pass": cc.passed}, cc.passed


def cmd_verify(args):
    curve = _require_curve(args)
    params, _ = _resolve_params(args)
    q = full_quantities(curve)
    rep = verify_chain(params, curve, args.tol, quantities=q)
    cl = classical_checks(q, args.tol)
    row = {
        "curve_id": args.curve,
        "W": rep.W,
        "fourier_bound": rep.fourier_bound,
        "uniform_bound": rep.uniform_bound,
        "chain_ok": rep.chain_ok,
        **{k: getattr(cl, k) for k in CLASSICAL},
        **_qdict(q),
    }
    ok = rep.chain_ok and cl.all_hold
    return [row], {"terms": rep.terms, "classical_gaps": cl.gaps, "all_pass": ok}, ok


def cmd_params(args):
    params, name = _resolve_params(args)
    cond = check_conditions(params)
    try:
        C2, C3 = stability_constants(params)
    except UndefinedConstantError:
        C2 = C3 = None
    row = {
        "name": name,
        **params.to_dict(),
        "D": cond.D,
        "ok_1_9": cond.ok_1_9,
        "ok_1_11": cond.ok_1_11,
        "ok_1_12": cond.ok_1_12,
        "ok_1_13": cond.ok_1_13,
        "ok_3_2": cond.ok_3_2,
        "C2": C2,
        "C3": C3,
        "classification": classify_stability(params).value,
    }
    return [row], {"residuals": cond.residuals, "failed_lines": cond.failed_lines()}, True


def cmd_stability(args):
    curve = _require_curve(args)
    params, _ = _resolve_params(args)
    r = verify_stability(params, curve, args.tol)
    row = {
        "curve_id": args.curve,
        "steiner_x": r.steiner_center.x,
        "steiner_y": r.steiner_center.y,
        "steiner_radius": r.steiner_radius,
        "h1": r.h1,
        "h1_sq": r.h1_sq,
        "h2_sq": r.h2_sq,
        "W": r.W,
        "C2": r.C2,
        "C3": r.C3,
        "bound_1_14_ok": r.bound_1_14_ok,
        "bound_1_15_ok": r.bound_1_15_ok,
        "classification": r.classification.value,
    }
    ok = r.bound_1_14_ok and r.bound_1_15_ok
    return [row], {"all_pass": ok}, ok


def scan_seeds(seed, count):
    """Per-curve seeds derived from one master seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


def cmd_scan(args):
    params, _ = _resolve_params(args)
    rows = []
    for i, s in enumerate(scan_seeds(args.seed, args.count)):
        curve = random_convex_curve(s, args.max_harmonic)
        rep = verify_chain(params, curve, args.tol)
        violation = max(0.0, rep.fourier_bound - rep.W, rep.uniform_bound - rep.fourier_bound, -rep.uniform_bound)
        rows.append(
            {
                "curve_id": i,
                "seed": s,
                "W": rep.W,
                "fourier_bound": rep.fourier_bound,
                "uniform_bound": rep.uniform_bound,
                "violation": violation / rep.scale,
                "chain_ok": rep.chain_ok,
            }
        )
    passed = sum(r["chain_ok"] for r in rows)
    summary = {
        "count": len(rows),
        "min_W": min((r["W"] for r in rows), default=None),
        "max_violation": max((r["violation"] for r in rows), default=0.0),
        "pass_rate": passed / len(rows) if rows else 1.0,
    }
    return rows, summary, passed == len(rows)


def cmd_presets(args):
    eps = 0.25 if args.eps is None else args.eps
    rows = []
    for name in PRESET_NAMES:
        e = eps if name == "cor_3_6" else None
        rows.append({"name": name, "epsilon": e, **preset(name, e).to_dict()})
    return rows, {}, True


COMMANDS = {
    "quantities": cmd_quantities,
    "verify": cmd_verify,
    "params": cmd_params,
    "stability": cmd_stability,
    "scan": cmd_scan,
    "presets": cmd_presets,
}


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def render(report, fmt, columns):
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    for key, val in sorted(report["meta"].items()):
        buf.write(f"# {key}={json.dumps(val, sort_keys=True)}\n")
    for key, val in sorted(report["summary"].items()):
        buf.write(f"# summary.{key}={json.dumps(val, sort_keys=True)}\n")
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in report["rows"]:
        writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})
    return buf.getvalue()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", metavar="PATH")
    common.add_argument("--params", metavar="PATH")
    common.add_argument("--preset", metavar="NAME", choices=PRESET_NAMES)
    common.add_argument("--eps", type=float, help="epsilon for preset cor_3_6")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=100)
    common.add_argument("--max-harmonic", type=int, default=8)
    common.add_argument("--grid", type=int, help="oracle quadrature nodes")
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--no-timestamp", action="store_true")

    parser = argparse.ArgumentParser(prog="isoparam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*COMMANDS, "gen"):
        sub.add_parser(name, parents=[common])
    return parser


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.tol is None:
        args.tol = DEFAULT_TOL.get(args.command, 1e-8)
    try:
        if args.command == "gen":
            curve = random_convex_curve(args.seed, args.max_harmonic)
            _emit(dumps_curve(curve) + "\n", args.out)
            return 0
        rows, summary, ok = COMMANDS[args.command](args)
    except (UsageError, OSError, ValueError, ConditionNotMet, NotConvexError, SolverError) as exc:
        print(f"isoparam {args.command}: {exc}", file=sys.stderr)
        return 2
    status = 0 if ok else 1
    meta = {
        "command": args.command,
        "tol": args.tol,
        "grid": args.grid,
        "seed": args.seed if args.command == "scan" else None,
        "count": args.count if args.command == "scan" else None,
        "max_harmonic": args.max_harmonic if args.command == "scan" else None,
        "curve": args.curve,
        "params": args.params or args.preset,
        "eps": args.eps,
        "status": status,
        "version": _pkg_version(),
        "columns": COLUMNS[args.command],
    }
    if not args.no_timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    report = {"meta": meta, "rows": rows, "summary": summary}
    _emit(render(report, args.format, COLUMNS[args.command]), args.out)
    return status


def main():
    sys.exit(run())

