"""Umbrella CLI: run the server, export identifier dictionaries, and drive
the adversary harness.

Environment overrides for `serve`: TWOD_CONFIG (config file), TWOD_STATE_PATH
(state snapshot), TWOD_BIND_ADDR (host:port).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import secrets
import sys
from contextlib import asynccontextmanager
from pathlib import Path

from . import harness
from .config import ConfigError, ServerConfig
from .identifiers import build_pattern_dictionary, export_dictionary
from .server import AuthServer, SnapshotError

CONFIG_ENV = "TWOD_CONFIG"
STATE_ENV = "TWOD_STATE_PATH"
BIND_ENV = "TWOD_BIND_ADDR"


def _load_or_create_config(path: Path) -> ServerConfig:
    if path.exists():
        config = ServerConfig.load(path)
        config.check()
        return config
    config = ServerConfig(master_key_hex=secrets.token_bytes(32).hex())
    config.check()
    path.parent.mkdir(parents=True, exist_ok=True)
    config.dump(path)
    print(f"wrote default config (with a fresh master key) to {path}", file=sys.stderr)
    return config


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    config_path = Path(args.config or os.environ.get(CONFIG_ENV) or "twodfa-config.json")
    state_path = Path(args.state or os.environ.get(STATE_ENV) or "twodfa-state.json")
    bind = args.bind or os.environ.get(BIND_ENV) or "127.0.0.1:8000"
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: bind address {bind!r} must look like host:port", file=sys.stderr)
        return 2

    try:
        config = _load_or_create_config(config_path)
        if state_path.exists():
            server = AuthServer.restore(state_path, config)
            print(f"restored state from {state_path}", file=sys.stderr)
        else:
            server = AuthServer(config)
    except (ConfigError, SnapshotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    @asynccontextmanager
    async def lifespan(app):
        yield
        server.persist(state_path)
        print(f"persisted state to {state_path}", file=sys.stderr)

    static_dir = Path(args.ui) if args.ui else None
    app = create_app(server, static_dir=static_dir)
    app.router.lifespan_context = lifespan
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


def cmd_dictionary_export(args) -> int:
    dictionary = build_pattern_dictionary(
        length=args.length,
        start_dot=args.start_dot,
        min_distance=args.min_distance,
        max_size=args.size,
    )
    text = export_dictionary(dictionary)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(dictionary)} identifiers to {args.out}")
    else:
        sys.stdout.write(text)
    if args.figure:
        from .figures import save_dictionary_sheet

        save_dictionary_sheet(dictionary, args.figure)
        print(f"wrote dictionary sheet to {args.figure}")
    return 0


def write_reports(reports, out_dir: Path) -> list[Path]:
    """Report directory: verdicts as JSON, assertions as CSV, figures as PNG."""
    from .figures import save_slip_far_chart, save_summary_chart

    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps([r.to_dict() for r in reports], indent=2) + "\n", encoding="utf-8"
    )
    written.append(json_path)

    csv_path = out_dir / "assertions.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "assertion", "passed", "detail"])
        for report in reports:
            for a in report.assertions:
                writer.writerow([report.scenario, a.name, "pass" if a.passed else "FAIL", a.detail])
    written.append(csv_path)

    written.append(save_summary_chart(reports, out_dir / "summary.png"))
    for report in reports:
        if report.scenario == "slip_far":
            written.append(save_slip_far_chart(report.extras, out_dir / "slip_far.png"))
    return written


def cmd_harness_run(args) -> int:
    if args.scenario:
        reports = [harness.run_scenario(args.scenario, seed=args.seed, fast=args.fast)]
    else:
        reports = harness.run_all(seed=args.seed, fast=args.fast)
    for report in reports:
        for a in report.assertions:
            marker = "PASS" if a.passed else "FAIL"
            detail = f"  ({a.detail})" if a.detail and not a.passed else ""
            print(f"[{report.scenario}] {marker} {a.name}{detail}")
        good, total = report.counts()
        print(f"{report.scenario}: {good}/{total} assertions passed")
    if args.report:
        paths = write_reports(reports, Path(args.report))
        print("report files: " + ", ".join(str(p) for p in paths))
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twodfa", description="2D-2FA reference implementation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the authentication server")
    p_serve.add_argument("--config", help=f"config file (default twodfa-config.json or ${CONFIG_ENV})")
    p_serve.add_argument("--state", help=f"state snapshot path (default twodfa-state.json or ${STATE_ENV})")
    p_serve.add_argument("--bind", help=f"host:port (default 127.0.0.1:8000 or ${BIND_ENV})")
    p_serve.add_argument("--ui", help="static web UI directory to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_dict = sub.add_parser("dictionary", help="identifier dictionary tools")
    dict_sub = p_dict.add_subparsers(dest="dict_command", required=True)
    p_export = dict_sub.add_parser("export", help="build and export the pattern dictionary")
    p_export.add_argument("--length", type=int, default=4)
    p_export.add_argument("--start-dot", type=int, default=1)
    p_export.add_argument("--min-distance", type=int, default=2)
    p_export.add_argument("--size", type=int, default=10)
    p_export.add_argument("--out", help="write identifiers here (default stdout)")
    p_export.add_argument("--figure", help="also render the patterns to this PNG")
    p_export.set_defaults(func=cmd_dictionary_export)

    p_harness = sub.add_parser("harness", help="adversary scenario harness")
    harness_sub = p_harness.add_subparsers(dest="harness_command", required=True)
    p_run = harness_sub.add_parser("run", help="run scenarios against a live in-process server")
    p_run.add_argument("--scenario", choices=sorted(harness.SCENARIOS), help="run one scenario only")
    p_run.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    p_run.add_argument("--report", help="directory for report.json, assertions.csv, and figures")
    p_run.add_argument("--fast", action="store_true", help="reduced trial counts for smoke runs")
    p_run.set_defaults(func=cmd_harness_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
