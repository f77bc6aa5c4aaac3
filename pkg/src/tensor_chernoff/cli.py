"""Command-line entry point.

    tensor-chernoff run --config cfg.ini --out report.json [--format json|csv]
                        [--workers N] [--seed S]

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
config error.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError, TensorChernoffError
from .reporting import emit
from .runner import run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensor-chernoff")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute a verification suite from a config file")
    runp.add_argument("--config", required=True, help="path to the INI config")
    runp.add_argument("--out", required=True, help="report output path")
    runp.add_argument("--format", choices=("json", "csv"), default="json")
    runp.add_argument("--workers", type=int, default=None, help="override [experiment] workers")
    runp.add_argument("--seed", type=int, default=None, help="override [experiment] seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        config = load_config(args.config)
        report = run(config, workers=args.workers, seed=args.seed)
        emit(report, args.out, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TensorChernoffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: lhs={check.lhs:.6g} rhs={check.rhs:.6g}")
    if report.tail_rows:
        print(f"tail table: {len(report.tail_rows)} rows written to {args.out}")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
