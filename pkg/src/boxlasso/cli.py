"""Command-line entry point.

One subcommand per experiment plus `validate` for checking produced CSVs
against their theory columns.  Exit codes: 0 success, 1 validation
failure, 2 configuration or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, SchemaError
from .experiments import (
    EXPERIMENTS,
    ExperimentSpec,
    parse_config_file,
    parse_tolerance_check,
    run_experiment,
    validate_against_theory,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxlasso",
        description=(
            "Box-constrained LASSO decoding experiments: asymptotic theory "
            "against Monte-Carlo simulation, plus hyper-parameter tuning."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        cmd = sub.add_parser(
            name.replace("_", "-"), help=f"run the {name} experiment"
        )
        cmd.add_argument("--config", required=True, help="flat key=value file")
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override seed")
        cmd.add_argument("--trials", type=int, default=None, help="override trials")
        cmd.add_argument("--threads", type=int, default=None, help="override threads")
        cmd.add_argument(
            "--no-plot", action="store_true", help="skip figure rendering"
        )
        cmd.set_defaults(experiment=name)

    val = sub.add_parser("validate", help="compare CSV theory vs MC columns")
    val.add_argument(
        "--csv", action="append", required=True, help="CSV file (repeatable)"
    )
    val.add_argument(
        "--check",
        action="append",
        required=True,
        help="metric=rel:TOL or metric=abs:TOL, optionally ',floor=X' (repeatable)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            checks = [parse_tolerance_check(text) for text in args.check]
            report = validate_against_theory(args.csv, checks)
            for line in report.lines():
                print(line)
            return 0 if report.passed else 1

        mapping = parse_config_file(args.config)
        spec = ExperimentSpec.from_mapping(mapping, experiment=args.experiment)
        spec = spec.with_overrides(
            seed=args.seed, trials=args.trials, threads=args.threads
        )
        summary = run_experiment(spec, args.out, make_plots=not args.no_plot)
        print(json.dumps(summary, sort_keys=True, indent=2))
        return 0
    except (ConfigError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
