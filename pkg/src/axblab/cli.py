"""``axblab run <suite>``: run verification suites and write reports."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import tomli

from .errors import ConfigInvalid
from .report import FORMATS, emit
from .suites import SUITES, config_from_mapping, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def threads_from_env(environ=os.environ):
    raw = environ.get("AXBLAB_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigInvalid(f"AXBLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigInvalid(f"AXBLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except FileNotFoundError:
        raise ConfigInvalid(f"config file not found: {path}") from None
    except tomli.TOMLDecodeError as exc:
        raise ConfigInvalid(f"{path}: {exc}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="axblab", description="Numerical checks for the quantum ax+b group.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a verification suite")
    run.add_argument("suite", help=f"one of {', '.join(SUITES + ('all',))}")
    run.add_argument("--config", type=Path, help="TOML config file")
    run.add_argument("--seed", type=int, help="overrides the config seed")
    run.add_argument("--out", type=Path, default=Path("axblab-out"), help="report directory")
    run.add_argument("--orientation", choices=("paper", "reproducing"), help="twist action orientation")
    run.add_argument("--quiet", action="store_true", help="suppress the per-check listing")
    return p


def run(args):
    if args.suite not in SUITES + ("all",):
        raise ConfigInvalid(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    cfg = config_from_mapping(load_config(args.config), seed=args.seed, orientation=args.orientation,
                              threads=threads_from_env())
    report = run_suite(args.suite, cfg)
    for fmt in FORMATS:
        emit(report, fmt, args.out)
    if not args.quiet:
        for r in sorted(report.records, key=lambda r: (r.passed, r.check_id)):
            print(f"{'pass' if r.passed else 'FAIL'}  {r.check_id}  residual={r.residual:.3e}  tol={r.tolerance:.1e}")
    n_fail = len(report.failures)
    print(f"{args.suite}: {len(report.records) - n_fail}/{len(report.records)} checks pass; reports in {args.out}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigInvalid as exc:
        print(f"axblab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
