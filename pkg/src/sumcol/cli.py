"""Command line front end.

Two subcommands: ``solve`` runs one instance file, ``bench`` runs every
instance of a manifest.  Both write the same CSV/JSON reports produced by
the library harness.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .bench import (
    MASC,
    MODES,
    InstanceRecord,
    ManifestError,
    default_params,
    load_instance,
    load_manifest,
    render_report,
    run_instance,
    write_report,
)
from .coloring import Coloring, ColoringFormatError, load_coloring, save_coloring
from .graph import DimacsParseError, load_dimacs
from .memetic import MemeticParams
from .tabucol import PopulationInitError

# --param keys and where each lands inside MemeticParams.
_PARAM_FIELDS = {
    "population_size": ("", "population_size", int),
    "max_generations": ("", "max_generations", int),
    "replace_second_worst_probability": ("", "replace_second_worst_probability", float),
    "exchange_idle_limit": ("tabu", "exchange_idle_limit", int),
    "relocate_idle_limit": ("tabu", "relocate_idle_limit", int),
    "stall_limit": ("tabu", "stall_limit", int),
    "iteration_budget": ("tabu", "iteration_budget", int),
    "init_iteration_budget": ("init", "iteration_budget", int),
    "init_restarts": ("init", "restarts", int),
    "init_tenure_base": ("init", "tenure_base", int),
    "init_tenure_slope": ("init", "tenure_slope", float),
}


def apply_param_overrides(params: MemeticParams, pairs: list[str]) -> MemeticParams:
    """Apply ``key=value`` strings from --param onto a parameter set."""
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise ValueError(f"--param expects key=value, got {pair!r}")
        if key not in _PARAM_FIELDS:
            known = ", ".join(sorted(_PARAM_FIELDS))
            raise ValueError(f"unknown parameter {key!r}; known: {known}")
        section, field, cast = _PARAM_FIELDS[key]
        try:
            value = cast(raw)
        except ValueError:
            raise ValueError(f"bad value {raw!r} for parameter {key!r}") from None
        if section:
            params = replace(params, **{section: replace(getattr(params, section), **{field: value})})
        else:
            params = replace(params, **{field: value})
    return params


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=MODES, default=MASC)
    parser.add_argument("--runs", type=int, default=10, help="runs per instance (default 10)")
    parser.add_argument("--seed", type=int, default=1, help="base seed (default 1)")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="override a search parameter; repeatable")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--jobs", type=int, default=1, help="parallel worker processes (default 1)")
    parser.add_argument("--times", action="store_true",
                        help="include wall-clock columns (breaks byte-for-byte determinism)")
    parser.add_argument("--validate", action="store_true",
                        help="run heavy internal consistency checks (slow)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumcol",
                                     description="Minimum sum coloring solver and benchmark runner")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve one DIMACS instance file")
    solve.add_argument("file", help="DIMACS .col instance")
    _add_common_options(solve)
    solve.add_argument("--warm-start", metavar="PATH",
                       help="coloring file used as an initial solution")
    solve.add_argument("--target", type=int,
                       help="stop a run once its best sum reaches this value")
    solve.add_argument("--best-known", type=int,
                       help="reference sum for the success-rate column")
    solve.add_argument("--save-best", metavar="PATH",
                       help="write the best coloring found to this file")

    bench = commands.add_parser("bench", help="run every instance in a manifest")
    bench.add_argument("manifest", help="manifest file listing instances")
    _add_common_options(bench)
    bench.add_argument("--skip-missing", action="store_true",
                       help="skip manifest instances whose files are absent")
    return parser


def _emit(reports, args) -> None:
    if args.out:
        write_report(reports, args.out, args.format, include_times=args.times)
    else:
        sys.stdout.write(render_report(reports, args.format, include_times=args.times))


def _cmd_solve(args) -> int:
    graph = load_dimacs(args.file)
    name = os.path.splitext(os.path.basename(args.file))[0]
    record = InstanceRecord(
        name=name, path=args.file, n=graph.n, m=graph.edge_count,
        best_known=args.best_known,
    )
    warm = load_coloring(args.warm_start, graph) if args.warm_start else None
    params = apply_param_overrides(default_params(args.mode), args.param)
    report = run_instance(
        record, mode=args.mode, runs=args.runs, base_seed=args.seed,
        params=params, graph=graph, warm_start=warm, target=args.target,
        jobs=args.jobs, validate=args.validate,
    )
    print(f"{record.name}: n={record.n} m={record.m} mode={args.mode} runs={args.runs}",
          file=sys.stderr)
    print(f"best sum {report.sum_best} with {report.k_best} colors; "
          f"avg {report.average:.2f}, sigma {report.sigma:.2f}", file=sys.stderr)
    if report.success_rate is not None:
        print(f"success rate {report.success_rate:.2f} against {report.best_known}",
              file=sys.stderr)
    _emit([report], args)
    if args.save_best:
        best = Coloring.from_assignment(report.best_assignment)
        save_coloring(args.save_best, best)
    return 0


def _cmd_bench(args) -> int:
    records = load_manifest(args.manifest)
    missing = [r for r in records if not os.path.exists(r.path)]
    if missing:
        names = ", ".join(r.name for r in missing)
        if not args.skip_missing:
            print(f"error: missing instance files: {names}", file=sys.stderr)
            return 1
        print(f"skipping missing instances: {names}", file=sys.stderr)
        records = [r for r in records if os.path.exists(r.path)]
    if not records:
        print("error: no instances to run", file=sys.stderr)
        return 1
    params = apply_param_overrides(default_params(args.mode), args.param)
    reports = []
    for record in records:
        graph = load_instance(record)
        report = run_instance(
            record, mode=args.mode, runs=args.runs, base_seed=args.seed,
            params=params, graph=graph, jobs=args.jobs, validate=args.validate,
        )
        print(f"{record.name}: best {report.sum_best} (k={report.k_best}), "
              f"avg {report.average:.2f}", file=sys.stderr)
        reports.append(report)
    _emit(reports, args)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_bench(args)
    except (DimacsParseError, ColoringFormatError, ManifestError,
            PopulationInitError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
