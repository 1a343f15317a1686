"""Command-line front end.

    freydlab run zmod4-ghost
    freydlab run --scenario path/to/file.json --output report.json
    freydlab ghost-search --ring Zmod:4 --trials 50 --seed 1
"""

from __future__ import annotations

import argparse
import json
import sys

from .rings import RingError, RingSpec
from .scenarios import (
    BUILTIN, ScenarioParseError, ScenarioValidationError, TaskError, ghost_search, run_scenario,
)


def _emit(report: dict, output: str | None):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freydlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file or built-in scenario")
    run.add_argument("name", nargs="?", help="built-in scenario name or JSON path")
    run.add_argument("--scenario", help="built-in scenario name or JSON path")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--output")

    gs = sub.add_parser("ghost-search", help="seeded random search for ghost maps")
    gs.add_argument("--ring", required=True)
    gs.add_argument("--trials", type=int, default=50)
    gs.add_argument("--seed", type=int, default=0)
    gs.add_argument("--max-length", type=int, default=4)
    gs.add_argument("--max-rank", type=int, default=3)
    gs.add_argument("--output")

    sub.add_parser("list", help="list built-in scenarios")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in BUILTIN:
            print(name)
        return 0
    if args.command == "ghost-search":
        try:
            ring = RingSpec.parse(args.ring)
        except RingError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if args.max_length < 1 or args.max_rank < 1 or args.trials < 0:
            print("error: bounds must be >= 1", file=sys.stderr)
            return 2
        _emit(ghost_search(ring, args.max_length, args.max_rank, args.trials, args.seed), args.output)
        return 0

    source = args.scenario or args.name
    if not source:
        print("error: give a scenario name or --scenario PATH", file=sys.stderr)
        return 2
    try:
        report = run_scenario(source, args.seed)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ScenarioValidationError as exc:
        where = ", ".join(f"{k}={v}" for k, v in exc.where.items() if v is not None)
        print(f"validation error: {exc}" + (f" ({where})" if where else ""), file=sys.stderr)
        return 3
    except TaskError as exc:
        print(f"task error: {exc}", file=sys.stderr)
        return 4
    _emit(report, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
