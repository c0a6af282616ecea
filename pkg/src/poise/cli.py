"""Command-line interface: replay, serve, bench, record.

Exit codes: 0 success, 1 input error (bad session data, empty or
under-calibrated sessions, I/O), 2 config error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from . import figures, service, wire
from .config import load_config
from .errors import ConfigError, PoiseError
from .replay import replay_file


def _parse_endpoint(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ConfigError(f"--listen expects host:port, got {text!r}")
    return host or "127.0.0.1", int(port)


def _cmd_replay(args) -> int:
    config = load_config(args.config)
    out_fp = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8", newline="\n")
    try:
        result = replay_file(args.file, config, out_fp=out_fp)
    finally:
        if out_fp is not sys.stdout:
            out_fp.close()
    print(wire.summary_line(result.summary))
    if args.figures is not None:
        stem = Path(args.file).name.split(".")[0] or "session"
        paths = figures.render_session_figures(
            result.reports, result.summary, args.figures, stem=stem
        )
        for p in paths:
            print(f"figure: {p}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    config = load_config(args.config)
    host, port = _parse_endpoint(args.listen)
    print(f"scoring service listening on ws://{host}:{port}", file=sys.stderr)
    try:
        asyncio.run(service.serve(config, host, port))
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_bench(args) -> int:
    config = load_config(args.config)
    result, _summary = bench_mod.run_bench(args.preset, args.duration, args.fps, config)
    if args.json:
        print(json.dumps(result.to_obj(), indent=2))
    else:
        print(bench_mod.format_bench_table(result))
    if args.figures is not None:
        out_dir = Path(args.figures)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = figures.render_latency_histogram(
            list(result.samples_ms), result.budget_ms, out_dir / f"bench_{args.preset}_latency.png"
        )
        print(f"figure: {path}", file=sys.stderr)
    return 0


def _cmd_record(args) -> int:
    host, port = _parse_endpoint(args.listen)
    print(f"recorder listening on ws://{host}:{port} -> {args.out}", file=sys.stderr)
    try:
        frames = asyncio.run(service.record(args.out, host, port, source=args.source))
    except KeyboardInterrupt:
        return 0
    print(f"recorded {frames} frames to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poise",
        description="Score speaker confidence from streamed face/hand landmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="score a recorded .pose.ndjson session file")
    p.add_argument("file", help="session file to replay")
    p.add_argument("--config", default=None, help="TOML config path (default: built-in)")
    p.add_argument("--out", default=None, help="write report lines here (default: stdout)")
    p.add_argument("--figures", default=None, metavar="DIR",
                   help="render timeline/channel figures into DIR")
    p.set_defaults(fn=_cmd_replay)

    p = sub.add_parser("serve", help="run the live scoring WebSocket service")
    p.add_argument("--listen", default="127.0.0.1:8765", metavar="HOST:PORT")
    p.add_argument("--config", default=None)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("bench", help="benchmark the engine on a synthetic preset")
    p.add_argument("--preset", required=True, choices=sorted(bench_mod.PRESETS))
    p.add_argument("--duration", type=float, default=60.0, metavar="SECONDS")
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--config", default=None)
    p.add_argument("--json", action="store_true", help="emit the result as JSON")
    p.add_argument("--figures", default=None, metavar="DIR",
                   help="render a latency histogram into DIR")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("record", help="record one inbound session to a file")
    p.add_argument("--listen", default="127.0.0.1:8765", metavar="HOST:PORT")
    p.add_argument("--out", required=True, help="session file to write")
    p.add_argument("--source", default="live", help="source label for the header")
    p.set_defaults(fn=_cmd_record)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (PoiseError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
