"""Batch command-line interface: validate, run, inspect."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import MnegotiError, ValidationError
from .runner import RunArtifacts, read_event_log, run
from .scenario import load_scenario_file

OUT_ENV_VAR = "MNEGOTI_OUT"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mnegoti",
        description="Deterministic multilateral negotiation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a scenario file")
    p_validate.add_argument("scenario", help="path to the scenario file")

    p_run = sub.add_parser("run", help="run a scenario and write artifacts")
    p_run.add_argument("scenario", help="path to the scenario file")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--replications", type=int, default=1, help="number of replications")
    p_run.add_argument(
        "--out",
        default=None,
        help=f"output directory (default: ${OUT_ENV_VAR} or ./out)",
    )
    p_run.add_argument("--ticks", type=int, default=None, help="override the scenario tick count")

    p_inspect = sub.add_parser("inspect", help="print a per-tick trace of an event log")
    p_inspect.add_argument("log", help="path to an events.log file")

    return parser


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario_file(args.scenario)
    except FileNotFoundError:
        print(f"error: no such file: {args.scenario}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 1
    print(
        f"ok: {len(scenario.criteria)} criteria, {len(scenario.issues)} issues, "
        f"{len(scenario.groups)} groups ({scenario.total_agents} agents), "
        f"{len(scenario.rooms)} rooms"
    )
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario_file(args.scenario)
    except FileNotFoundError:
        print(f"error: no such file: {args.scenario}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 1
    out_dir = args.out or os.environ.get(OUT_ENV_VAR) or "out"
    if args.replications < 1:
        print("error: --replications must be >= 1", file=sys.stderr)
        return 1
    try:
        results = run(
            scenario,
            seed=args.seed,
            replications=args.replications,
            out_dir=out_dir,
            ticks=args.ticks,
        )
    except MnegotiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for artifacts in results:
        _print_summary(artifacts)
    print(f"artifacts written under {Path(out_dir)}")
    return 0


def _print_summary(artifacts: RunArtifacts) -> None:
    print(f"seed {artifacts.seed}: {len(artifacts.events)} events, "
          f"{len(artifacts.summary)} sessions")
    if not artifacts.summary:
        return
    header = f"  {'room':>4} {'session':>7} {'status':<14} {'issue':>5} {'rounds':>6} {'welfare':>9} {'min_u':>7} {'nash':>7}"
    print(header)
    for row in artifacts.summary:
        issue = "-" if row.issue_id is None else str(row.issue_id)
        print(
            f"  {row.room_id:>4} {row.session:>7} {row.status:<14} {issue:>5} "
            f"{row.rounds:>6} {row.welfare:>9.4f} {row.min_utility:>7.4f} {row.nash_product:>7.4f}"
        )


def _cmd_inspect(args: argparse.Namespace) -> int:
    try:
        events = read_event_log(args.log)
    except FileNotFoundError:
        print(f"error: no such file: {args.log}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: malformed event log: {exc}", file=sys.stderr)
        return 1
    current_tick = None
    for record in events:
        if record.tick != current_tick:
            current_tick = record.tick
            print(f"tick {current_tick}:")
        band = "-" if record.priority is None else str(record.priority)
        details = " ".join(f"{k}={record.data[k]}" for k in sorted(record.data))
        print(f"  [{band:>4}] {record.kind} {details}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_inspect(args)


if __name__ == "__main__":
    sys.exit(main())
