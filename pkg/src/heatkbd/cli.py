"""Command-line interface: replay event logs, generate scenario logs, and
run the live feedback service.

Exit codes: 0 on success, 1 on input errors (bad logs or parameters), 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .engine import EngineParams
from .ingest import GridRangeError, LogParseError
from .replay import SCENARIOS, gen_scenario, run_replay, to_csv, to_jsonl
from .service import ServiceConfig, serve


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--period-s", type=float, default=1800.0,
                        help="sampling period in seconds (default 1800 = 30 min)")
    parser.add_argument("--notif-s", type=float, default=300.0,
                        help="notification correction time in seconds (default 300)")
    parser.add_argument("--threshold-s", type=float, default=30.0,
                        help="short-interval threshold in seconds (default 30)")
    parser.add_argument("--alpha", type=float, default=0.2,
                        help="forgetting coefficient in (0,1) (default 0.2)")
    parser.add_argument("--strictness", type=float, default=1.0,
                        help="quantizer strictness exponent (default 1.0)")
    parser.add_argument("--levels", type=int, default=5,
                        help="number of temperature levels, 2..8 (default 5)")


def _params_from(args: argparse.Namespace) -> EngineParams:
    return EngineParams(
        sampling_period_s=args.period_s,
        notification_correction_s=args.notif_s,
        notification_threshold_s=args.threshold_s,
        alpha=args.alpha,
        strictness=args.strictness,
        level_count=args.levels,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatkbd",
        description="Smartphone-usage feedback pipeline: replay, scenario "
                    "generation, and a live keyboard feedback service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser("replay", help="replay an event log to a temperature timeline")
    replay.add_argument("--log", required=True, help="path to the event log")
    _add_engine_flags(replay)
    replay.add_argument("--origin-ms", type=int, default=None,
                        help="grid origin (default: first event truncated to a whole period)")
    replay.add_argument("--horizon-ms", type=int, default=None,
                        help="override the log horizon (default: '# horizon_ms=' marker or last event)")
    replay.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    replay.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")

    gen = sub.add_parser(
        "gen",
        help="generate a synthetic scenario event log",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "scenario shapes (fixed illustrative constants, simulated seconds):\n"
            "  idle                no events at all\n"
            "  uninterrupted       screen on for the whole horizon\n"
            "  notification-storm  glances of 2-10 s, mean gap 90 s\n"
            "  typical-day         quiet morning / evening glances every\n"
            "                      900-2400 s, midday use blocks of 240-1200 s\n"
            "                      separated by 60-600 s pauses"
        ),
    )
    gen.add_argument("--scenario", required=True,
                     help=f"one of {', '.join(SCENARIOS)}")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--periods", type=int, required=True,
                     help="horizon length in sampling periods")
    gen.add_argument("--period-s", type=int, default=1800,
                     help="sampling period the scenario is shaped around (default 1800)")
    gen.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")

    srv = sub.add_parser("serve", help="run the live feedback service")
    _add_engine_flags(srv)
    srv.add_argument("--time-scale", type=float, default=60.0,
                     help="simulated seconds per wall second (default 60)")
    srv.add_argument("--listen", default="127.0.0.1:8600", help="host:port to bind")
    srv.add_argument("--ui-dir", default=None,
                     help="directory of built keyboard UI assets to serve at /")

    return parser


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        params = _params_from(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        with open(args.log, encoding="utf-8") as fh:
            log_text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.log}: {exc}", file=sys.stderr)
        return 1
    try:
        records = run_replay(log_text, params, args.origin_ms, args.horizon_ms)
    except LogParseError as exc:
        print(f"error: {args.log}:{exc.line_no}: {exc.reason}", file=sys.stderr)
        return 1
    except (GridRangeError, ValueError) as exc:
        print(f"error: {args.log}: {exc}", file=sys.stderr)
        return 1
    text = to_csv(records) if args.format == "csv" else to_jsonl(records)
    _write_output(text, args.output)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.scenario not in SCENARIOS:
        print(f"usage error: unknown scenario {args.scenario!r}; "
              f"choose from {', '.join(SCENARIOS)}", file=sys.stderr)
        return 2
    try:
        text = gen_scenario(args.scenario, args.seed, args.periods, args.period_s)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_output(text, args.output)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        params = _params_from(args)
        host, _, port_text = args.listen.partition(":")
        config = ServiceConfig(
            params=params,
            time_scale=args.time_scale,
            host=host or "127.0.0.1",
            port=int(port_text) if port_text else 8600,
            ui_dir=args.ui_dir,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.ui_dir is not None and not os.path.isdir(config.ui_dir):
        print(f"error: --ui-dir {config.ui_dir} is not a directory", file=sys.stderr)
        return 1
    serve(config)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "replay":
        return _cmd_replay(args)
    if args.command == "gen":
        return _cmd_gen(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
