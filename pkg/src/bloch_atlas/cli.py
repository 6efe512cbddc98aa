"""Command-line interface.

Commands
--------
pair        analyze one two-generator section (areas, probability,
            optional boundary decomposition, optional SVG drawing)
triad       analyze one three-generator section (volumes, probability,
            optional boundary-surface decomposition)
enumerate   sweep all generator pairs of a level count into equivalence
            classes and write them as CSV
fullspace   quasi-Monte-Carlo volume of a full 9- or 15-dimensional
            two-qubit body under principal-minor constraint sets
compare     recompute the scenarios of a stored reference table and
            report per-row deviations

Exit codes: 0 success, 1 argument error, 2 numerical nonconvergence,
3 comparison failure (a verified reference row out of tolerance).
Errors are written to stderr and name the scenario and the failing
sub-operation.
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import json
import sys

from . import enumeration, fullspace, plotting, refdata, scenarios
from .errors import (BlochAtlasError, ComparisonError,
                     NumericalFailureError, QuadratureError)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_COMPARISON = 3

LEVEL_COUNTS = (4, 6, 8, 9, 10)


class UsageError(Exception):
    """Invalid command-line arguments."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we map usage to 1
        raise UsageError(message)


def _parse_generators(text: str, count: int, n: int) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise UsageError(
            f"--gens expects {count} comma-separated indices, got {text!r}")
    try:
        gens = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--gens must be integers, got {text!r}") from None
    limit = n * n - 1
    for g in gens:
        if not 1 <= g <= limit:
            raise UsageError(
                f"generator index {g} out of range 1..{limit} for n={n}")
    if len(set(gens)) != count:
        raise UsageError(f"generator indices must be distinct: {text!r}")
    return gens


def _conditions(n: int, decomp: str):
    labels = tuple(p.strip() for p in decomp.split(",") if p.strip())
    if not labels:
        raise UsageError("--decomp must name at least one decomposition")
    request = labels[0] if len(labels) == 1 else labels
    try:
        scenarios.condition_maps(n, request)
    except (BlochAtlasError, KeyError, ValueError) as err:
        raise UsageError(f"invalid --decomp for n={n}: {err}") from None
    return request


def _emit_scenario(result, args) -> None:
    if getattr(args, "json", False):
        payload = {
            "total": result.total_measure,
            "joint": result.joint_measure,
            "probability": result.probability,
        }
        if result.boundary is not None:
            payload["boundary"] = dict(result.boundary)
        print(json.dumps(payload))
        return
    if getattr(args, "csv", False):
        buffer = io.StringIO()
        writer = _csv.writer(buffer, lineterminator="\n")
        writer.writerow(scenarios.CSV_COLUMNS)
        writer.writerow(result.csv_row())
        sys.stdout.write(buffer.getvalue())
        return
    gens = ",".join(str(g) for g in result.generators)
    print(f"n={result.n} generators {{{gens}}} conditions "
          f"{'+'.join(result.condition_labels)}")
    print(f"total        {result.total_measure!r}")
    print(f"joint        {result.joint_measure!r}")
    print(f"probability  {result.probability!r}")
    if result.boundary is not None:
        for key, value in result.boundary.items():
            print(f"{key:<22} {value!r}")


def _cmd_pair(args) -> int:
    gens = _parse_generators(args.gens, 2, args.n)
    conditions = _conditions(args.n, args.decomp)
    result = scenarios.analyze_pair(
        args.n, gens, conditions,
        with_boundary=args.boundary, rtol=args.tol)
    if args.svg:
        drawing = plotting.section_svg(result.spec, result.conditions)
        with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(drawing)
    _emit_scenario(result, args)
    return EXIT_OK


def _cmd_triad(args) -> int:
    gens = _parse_generators(args.gens, 3, args.n)
    if args.decomp is None:
        if args.n != 4:
            raise UsageError(f"--decomp is required for n={args.n}")
        args.decomp = "2x2"
    conditions = _conditions(args.n, args.decomp)
    result = scenarios.analyze_triad(
        args.n, gens, conditions,
        with_boundary_surface=args.boundary_surface, rtol=args.tol)
    _emit_scenario(result, args)
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    if args.parallel is not None and args.parallel < 1:
        raise UsageError("--parallel must be a positive worker count")
    conditions = _conditions(args.n, args.decomp)
    table = enumeration.enumerate_classes(
        args.n, conditions, parallel=args.parallel)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(enumeration.CSV_COLUMNS)
        writer.writerows(table.csv_rows())
    print(f"n={args.n} conditions "
          f"{'+'.join(m.label for m in table.conditions)}: "
          f"{len(table.classes)} classes, {table.trivial_count} trivial "
          f"pairs of {table.total_pairs} -> {args.out}")
    return EXIT_OK


def _cmd_fullspace(args) -> int:
    try:
        constraint_set = fullspace.MinorConstraintSet(
            args.case, args.constraints)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.parallel is not None and args.parallel < 1:
        raise UsageError("--parallel must be a positive worker count")
    try:
        estimate = fullspace.minor_volume(
            constraint_set, args.samples, args.seed,
            method=args.method, parallel=args.parallel)
    except ValueError as err:
        raise UsageError(str(err)) from None
    payload = estimate.to_json_dict()
    target = fullspace.target_volume(args.case, args.constraints)
    payload["target"] = target
    payload["z_score"] = (estimate.z_score(target)
                          if target is not None else None)
    print(json.dumps(payload))
    return EXIT_OK


def _compare_inputs(table):
    """Recompute the quantities a reference table stores."""
    if table.table_id == "fullspace_constants":
        constants = fullspace.reference_constants()
        supplied = {}
        for case, constraints in (("real", "base"), ("real", "refine1"),
                                  ("real", "refine2"), ("real", "ppt"),
                                  ("complex", "base"), ("complex", "ppt")):
            supplied[f"{case}_{constraints}"] = fullspace.target_volume(
                case, constraints)
        supplied["real_hs_volume"] = constants["real_hs_volume"]
        supplied["complex_hs_volume"] = constants["complex_hs_volume"]
        supplied["real_overestimation_ratio"] = (
            constants["real_hs_volume"]
            / fullspace.target_volume("real", "base"))
        supplied["real_crude_probability"] = (
            fullspace.target_volume("real", "ppt")
            / fullspace.target_volume("real", "base"))
        supplied["complex_crude_probability"] = (
            fullspace.target_volume("complex", "ppt")
            / fullspace.target_volume("complex", "base"))
        return supplied
    with_boundary = (table.table_id.endswith("_boundary")
                     or table.table_id.endswith("_interior")
                     or table.table_id == "m3_boundary_areas")
    results = []
    for row in table.rows:
        if len(row.gens) == 3:
            results.append(scenarios.analyze_triad(
                table.n, row.gens, table.conditions,
                with_boundary_surface=with_boundary))
        else:
            results.append(scenarios.analyze_pair(
                table.n, row.gens, table.conditions,
                with_boundary=with_boundary))
    return results


def _cmd_compare(args) -> int:
    try:
        table = refdata.load(args.table)
    except KeyError as err:
        raise UsageError(err.args[0]) from None
    report = refdata.compare(_compare_inputs(table), table,
                             tolerance=args.tol)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report.to_json_dict(), fh, indent=2)
            fh.write("\n")
    print(f"{report.table_id}: checked {report.n_checked} "
          f"(informational {report.n_informational}), "
          f"failures {report.n_fail}, "
          f"max deviation {report.max_deviation:.3e}, "
          f"tolerance {report.tolerance:g}")
    if not report.passed:
        print(f"error: comparison against table {report.table_id!r} "
              f"failed for {report.n_fail} row fields", file=sys.stderr)
        return EXIT_COMPARISON
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="bloch-atlas",
        description="Hilbert-Schmidt geometry of two- and three-parameter "
                    "sections of n-level quantum state spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, count):
        p.add_argument("--n", type=int, required=True,
                       choices=LEVEL_COUNTS,
                       help="level count of the state space")
        p.add_argument("--gens", required=True,
                       help=f"{count} comma-separated generator indices")
        p.add_argument("--tol", type=float, default=None,
                       help="relative quadrature tolerance")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true",
                         help="machine-readable JSON on stdout")
        fmt.add_argument("--csv", action="store_true",
                         help="CSV (header plus one row) on stdout")

    p_pair = sub.add_parser("pair", help="analyze a two-generator section")
    add_common(p_pair, 2)
    p_pair.add_argument("--decomp", required=True,
                        help="decomposition (e.g. 2x2, 3x2, bi, tri, "
                             "or comma-joined labels)")
    p_pair.add_argument("--boundary", action="store_true",
                        help="include the boundary-length decomposition")
    p_pair.add_argument("--svg", metavar="PATH",
                        help="write an SVG drawing of the section")
    p_pair.set_defaults(func=_cmd_pair)

    p_triad = sub.add_parser("triad",
                             help="analyze a three-generator section")
    add_common(p_triad, 3)
    p_triad.add_argument("--decomp", default=None,
                         help="decomposition (defaults to 2x2 when n=4)")
    p_triad.add_argument("--boundary-surface", action="store_true",
                         help="include the boundary-surface decomposition")
    p_triad.set_defaults(func=_cmd_triad)

    p_enum = sub.add_parser("enumerate",
                            help="group all generator pairs into classes")
    p_enum.add_argument("--n", type=int, required=True,
                        choices=LEVEL_COUNTS)
    p_enum.add_argument("--decomp", required=True,
                        help="decomposition or comma-joined labels "
                             "(e.g. 4x2,2x4,mid222)")
    p_enum.add_argument("--out", required=True, metavar="PATH",
                        help="CSV output path")
    p_enum.add_argument("--parallel", type=int, default=None,
                        help="worker processes for the sweep")
    p_enum.set_defaults(func=_cmd_enumerate)

    p_full = sub.add_parser("fullspace",
                            help="volume of a full two-qubit body")
    p_full.add_argument("--case", required=True,
                        help="real or complex")
    p_full.add_argument("--constraints", required=True,
                        help="base, ppt, refine1, or refine2")
    p_full.add_argument("--samples", type=int, required=True,
                        help="total sample budget")
    p_full.add_argument("--seed", type=int, default=0,
                        help="random seed (all randomness derives from it)")
    p_full.add_argument("--method", default="sobol",
                        choices=("sobol", "plain"),
                        help="scrambled Sobol (default) or plain "
                             "pseudorandom sampling")
    p_full.add_argument("--parallel", type=int, default=None,
                        help="worker processes over the 32 streams")
    p_full.set_defaults(func=_cmd_fullspace)

    p_cmp = sub.add_parser("compare",
                           help="recompute a reference table and report "
                                "deviations")
    p_cmp.add_argument("--table", required=True,
                       help="reference table identifier (e.g. n4_pairs)")
    p_cmp.add_argument("--tol", type=float, default=1e-6,
                       help="comparison tolerance (default 1e-6)")
    p_cmp.add_argument("--out", metavar="PATH",
                       help="write the full JSON report here")
    p_cmp.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, NumericalFailureError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ComparisonError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_COMPARISON
    except BlochAtlasError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
