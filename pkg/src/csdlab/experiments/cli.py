"""Command-line entry point.

    csd run --config <path> [--seed S] [--out DIR] [--quiet]
    csd probe <name> --config <path> [--seed S] [--out DIR] [--quiet]
    csd list-scenarios

Exit codes: 0 all assertions passed; 1 at least one assertion failed;
2 config error; 3 evolution failure (blow-up guard or non-finite fields);
4 filesystem failure.
"""

from __future__ import annotations

import argparse
import sys

from ..solver import SolverError
from .config import SCENARIOS, ConfigError, parse_config
from .scenarios import run_scenario

PROBE_NAMES = ("product", "besov", "dilation", "bilinear", "energy")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="path to the experiment config")
    sub.add_argument("--seed", type=int, default=None, help="override the config seed")
    sub.add_argument("--out", default=None, help="override the config output directory")
    sub.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csd",
                                     description="Scenario runner for the null-coordinate "
                                                 "solver and norm-probe laboratory.")
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run the scenario declared in a config")
    _add_common(run)

    probe = subs.add_parser("probe", help="run one of the inequality probes")
    probe.add_argument("name", choices=PROBE_NAMES, help="probe name")
    _add_common(probe)

    subs.add_parser("list-scenarios", help="print the closed set of scenario names")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "list-scenarios":
        for name in sorted(SCENARIOS):
            print(name)
        return 0

    try:
        config = parse_config(args.config)
        if args.command == "probe":
            expected = f"probe_{args.name}"
            if config.scenario != expected:
                raise ConfigError(f"config declares scenario {config.scenario!r}, "
                                  f"but 'csd probe {args.name}' needs {expected!r}")
        config = config.with_overrides(seed=args.seed, out_dir=args.out)
        result = run_scenario(config, quiet=args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"filesystem error: {exc}", file=sys.stderr)
        return 4
    return 0 if result.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
