"""Command-line interface.

One executable with a subcommand per operation.  Module and complex
files use the JSON formats of ``diffmod.serial``; coordinates on the
command line are 1-based.  Exit codes: 0 success, 1 validation or
verification failure, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import serial
from .errors import (
    DiffmodError,
    DimensionMismatch,
    InternalConsistencyError,
    NotAComplexError,
    UnsupportedOperation,
)
from .exactla import DEFAULT_PRIME, PrimeField, parse_field
from .dmcore import compress, validate
from .harness import fixtures, run_bound_experiment
from .homology import homology_summary
from .structure import build_flag, minimize
from .torbetti import betti, check_tor_inequality, high_low

USAGE_ERROR = 2
CHECK_FAILED = 1


def _load_module(args):
    data = serial.load(args.file)
    module = serial.module_from_json(data)
    if args.field:
        module = serial.coerce_field(module, parse_field(args.field))
    return module


def _emit(args, payload: dict, text_lines) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_validate(args) -> int:
    module = _load_module(args)
    violations = validate(module)
    payload = {"ok": not violations, "violations": [v.message for v in violations]}
    _emit(args, payload, ["ok"] if not violations else [v.message for v in violations])
    return 0 if not violations else CHECK_FAILED


def cmd_homology(args) -> int:
    module = _load_module(args)
    summary = homology_summary(module, checked=True)
    payload = serial.summary_to_json(summary)
    lines = [
        f"finite_length: {summary.finite_length}",
        f"total_length: {'infinite' if summary.total_length is None else summary.total_length}",
        f"support_box: {summary.support_box}",
    ]
    for cell, dim in zip(summary.decomposition.cells, summary.dims):
        if dim:
            lines.append(f"  dim {dim} on {cell.intervals}")
    _emit(args, payload, lines)
    return 0


def cmd_betti(args) -> int:
    module = _load_module(args)
    witness = None
    if args.flag and args.provenance:
        raise UnsupportedOperation("give at most one of --flag and --provenance")
    if args.flag:
        witness = serial.flag_from_json(serial.load(args.flag))
    if args.provenance:
        witness = serial.provenance_from_json(serial.load(args.provenance))
    result = betti(module, witness)
    summary = homology_summary(module)
    bound = 2 ** module.ring.d
    payload = {
        "betti": result.value,
        "method": result.method,
        "rank": module.n,
        "homology_length": (
            "infinite" if summary.total_length is None else summary.total_length
        ),
        "bound_2d": bound,
        "bound_satisfied": result.value >= bound,
    }
    _emit(args, payload, [f"{key}: {value}" for key, value in payload.items()])
    return 0


def cmd_minimize(args) -> int:
    module = _load_module(args)
    result = minimize(module)
    payload = {
        "module": serial.module_to_json(result.module),
        "steps": [{"row": s.row + 1, "col": s.col + 1} for s in result.steps],
        "direct_summand": result.direct_summand,
    }
    _emit(args, payload, [
        f"cancelled {len(result.steps)} pair(s); rank {module.n} -> {result.module.n}",
        f"direct summand of the input: {result.direct_summand}",
        json.dumps(serial.module_to_json(result.module), indent=2, sort_keys=True),
    ])
    return 0


def cmd_flag(args) -> int:
    module = _load_module(args)
    order = build_flag(module)
    payload = {"levels": serial.flag_to_json(order)}
    _emit(args, payload, [f"levels: {list(order.levels)}"])
    return 0


def cmd_compress(args) -> int:
    data = serial.load(args.file)
    complex_ = serial.complex_from_json(data)
    module = compress(complex_)
    payload = serial.module_to_json(module)
    _emit(args, payload, [json.dumps(payload, indent=2, sort_keys=True)])
    return 0


def cmd_highlow(args) -> int:
    module = _load_module(args)
    decomposition = high_low(module, args.dir - 1)
    payload = {
        "direction": args.dir,
        "low_value": decomposition.low_value,
        "high_value": decomposition.high_value,
        "truncated": serial.module_to_json(decomposition.truncated),
        "low": serial.module_to_json(decomposition.low),
        "high": serial.module_to_json(decomposition.high),
    }
    _emit(args, payload, [
        f"direction {args.dir}: support in [{decomposition.low_value}, {decomposition.high_value}]",
        json.dumps(payload, indent=2, sort_keys=True),
    ])
    return 0


def cmd_tor_ineq(args) -> int:
    module = _load_module(args)
    report = check_tor_inequality(module, args.dir - 1)
    payload = {
        "lhs": report.lhs,
        "rhs_low": report.rhs_low,
        "rhs_high": report.rhs_high,
        "holds": report.holds,
    }
    _emit(args, payload, [
        f"{report.lhs} >= {report.rhs_low} + {report.rhs_high}: {report.holds}"
    ])
    return 0 if report.holds else CHECK_FAILED


def cmd_fixtures(args) -> int:
    field = parse_field(args.field) if args.field else None
    items = fixtures(field)
    rows = []
    failures = []
    for fixture in items:
        row = {
            "name": fixture.name,
            "d": fixture.module.ring.d,
            "rank": fixture.rank,
            "betti": fixture.betti,
            "homology_length": fixture.homology_length,
            "diff_degree": list(fixture.module.diff_degree),
        }
        if args.check:
            problems = []
            if validate(fixture.module):
                problems.append("validate failed")
            summary = homology_summary(fixture.module)
            if summary.total_length != fixture.homology_length:
                problems.append(f"homology length {summary.total_length}")
            witness = fixture.flag or fixture.provenance
            value = betti(fixture.module, witness).value
            if value != fixture.betti:
                problems.append(f"betti {value}")
            row["ok"] = not problems
            if problems:
                failures.append(f"{fixture.name}: {'; '.join(problems)}")
        rows.append(row)
    _emit(args, {"fixtures": rows, "failures": failures}, [
        (
            f"{row['name']}: d={row['d']} rank={row['rank']} betti={row['betti']} "
            f"h-length={row['homology_length']}"
            + (f" ok={row['ok']}" if args.check else "")
        )
        for row in rows
    ] + failures)
    return CHECK_FAILED if failures else 0


def cmd_experiment(args) -> int:
    from . import plots

    field = parse_field(args.field) if args.field else PrimeField(DEFAULT_PRIME)
    result = run_bound_experiment(args.count, args.dim, args.seed, field)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = plots.write_reports_csv(result.reports, out_dir / f"bound_reports_d{args.dim}.csv")
    figure_paths = plots.render_experiment_figures(result, out_dir)
    dumps = []
    for report, module in result.violations:
        path = out_dir / f"counterexample_{report.instance.replace(':', '_')}.json"
        serial.dump(serial.module_to_json(module), path)
        dumps.append(str(path))
    payload = {
        "d": args.dim,
        "seed": args.seed,
        "requested": result.requested,
        "checked": len(result.reports),
        "skipped_zero_homology": result.skipped_zero,
        "skipped_infinite_homology": result.skipped_infinite,
        "min_betti": result.min_betti,
        "bound": 2 ** args.dim,
        "violations": len(result.violations),
        "csv": str(csv_path),
        "figures": [str(p) for p in figure_paths],
        "counterexamples": dumps,
    }
    _emit(args, payload, [
        f"checked {payload['checked']} instances "
        f"(skipped {result.skipped_zero} with zero homology, "
        f"{result.skipped_infinite} with infinite homology)",
        f"minimum betti: {result.min_betti}  (bound 2^{args.dim} = {2 ** args.dim})",
        f"violations: {len(result.violations)}",
        f"reports: {csv_path}",
        *(f"figure: {p}" for p in figure_paths),
        *(f"counterexample: {p}" for p in dumps),
    ])
    return CHECK_FAILED if result.violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffmod",
        description="Exact homological computations for multigraded differential modules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="input JSON file")
        p.add_argument("--field", help="QQ or Fp:<p>; overrides the file's field")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="check module axioms")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("homology", help="degreewise homology summary")
    common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("betti", help="Betti number report")
    common(p)
    p.add_argument("--flag", help="JSON file with a flag order (array of levels)")
    p.add_argument("--provenance", help="JSON file with a cancellation provenance")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("minimize", help="cancel all unit entries")
    common(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("flag", help="construct a flag order by layering")
    common(p)
    p.set_defaults(func=cmd_flag)

    p = sub.add_parser("compress", help="compress a complex file into a module")
    common(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("highlow", help="high-low decomposition in one direction")
    common(p)
    p.add_argument("--dir", type=int, required=True, help="coordinate direction (1-based)")
    p.set_defaults(func=cmd_highlow)

    p = sub.add_parser("tor-ineq", help="check the Tor length inequality")
    common(p)
    p.add_argument("--dir", type=int, required=True, help="coordinate direction (1-based)")
    p.set_defaults(func=cmd_tor_ineq)

    p = sub.add_parser("fixtures", help="list (and optionally verify) the reference modules")
    common(p, with_file=False)
    p.add_argument("--check", action="store_true", help="recompute and verify expectations")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("experiment", help="run the rank-bound experiment")
    common(p, with_file=False)
    p.add_argument("--count", type=int, required=True, help="number of generated instances")
    p.add_argument("--dim", type=int, required=True, help="number of variables")
    p.add_argument("--seed", type=int, default=0, help="experiment seed")
    p.add_argument("--out", default="diffmod-report", help="directory for CSV, figures, dumps")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NotAComplexError, InternalConsistencyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return CHECK_FAILED
    except (UnsupportedOperation, DimensionMismatch) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except DiffmodError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
