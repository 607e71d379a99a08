"""Command-line front end.

    cgmlab <command> [--alpha A] [--n N] [--seed S] [--replicas R] [--config FILE]
                     [--out report.json] [--csv table.csv] [--threads T]

Exit status: 0 when every gate passes, 1 when some gate fails (the report
is still written), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .lattice import DomainError
from .verify import CHECKS, VERIFY_ALL, run_check

SCHEMA_VERSION = 1
COMMANDS = ("lpp", "stationary", "busemann", "trees", "classify", "markov", "midpoint", "shape", "ci", "render", "verify-all")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgmlab", description="Exponential corner growth model laboratory.")
    p.add_argument("--version", action="version", version=f"cgmlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float)
    common.add_argument("--n", type=int, help="lattice size / horizon N")
    common.add_argument("--seed", type=int)
    common.add_argument("--replicas", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--block", type=int, help="bootstrap block length")
    common.add_argument("--length", type=int, help="Markov chain length")
    common.add_argument("--config", type=Path, help="flat key = value file")
    common.add_argument("--out", type=Path, help="JSON report (default: stdout)")
    common.add_argument("--csv", type=Path, help="CSV table of scalar results")

    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "render":
            sp.add_argument("what", choices=["trees"])
            sp.add_argument("--size", type=int, default=40)
    return p


def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            for i, v in enumerate(obj):
                rows.append((f"{prefix}[{i}]", v))
        else:
            for i, v in enumerate(obj):
                _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj))


def csv_table(reports: dict) -> str:
    """RFC-4180 table with one row per scalar: ``report, key, value``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["report", "key", "value"])
    for name, rep in reports.items():
        rows: list = []
        _flatten("", rep.get("results", {}), rows)
        _flatten("gates", rep.get("gates", {}), rows)
        for k, v in rows:
            w.writerow([name, k, v])
    return buf.getvalue()


def manifest(command: str, cfg: RunConfig, reports: dict, started: str, finished: str, elapsed: float) -> dict:
    gates = {f"{name}.{g}": ok for name, rep in reports.items() for g, ok in rep.get("gates", {}).items()}
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "config": cfg.as_dict(),
        "seed": cfg.seed,
        "gates": gates,
        "passed": all(gates.values()),
        "reports": reports,
        "timestamps": {"start": started, "end": finished, "elapsed_s": round(elapsed, 3)},
    }


def payload(man: dict) -> dict:
    """The manifest without its timestamps; identical across reruns."""
    return {k: v for k, v in man.items() if k != "timestamps"}


def _run_many(names, cfg: RunConfig) -> dict:
    if cfg.threads > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            futs = {n: ex.submit(run_check, n, cfg) for n in names}
            return {n: futs[n].result() for n in names}
    return {n: run_check(n, cfg) for n in names}


def _render(args, cfg: RunConfig) -> dict:
    from .render import svg_from_report, tree_report

    rep = tree_report(cfg.alpha, cfg.n, cfg.seed, args.size)
    svg = svg_from_report(rep)
    target = args.out.with_suffix(".svg") if args.out and args.out.suffix != ".svg" else args.out
    if target is None:
        target = Path("tree.svg")
    target.write_text(svg)
    return {"render": {"name": "render", "results": {"svg": str(target), "size": args.size}, "gates": {}, "passed": True}}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 2
    overrides = {k: getattr(args, k) for k in ("alpha", "n", "seed", "replicas", "threads", "block", "length")}
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as e:
        print(f"cgmlab: configuration error: {e}", file=sys.stderr)
        return 2

    started = _now()
    t0 = time.perf_counter()
    try:
        if args.command == "render":
            reports = _render(args, cfg)
            args_out = None
        else:
            names = VERIFY_ALL if args.command == "verify-all" else (args.command,)
            reports = _run_many(names, cfg)
            args_out = args.out
    except DomainError as e:
        print(f"cgmlab: {e}", file=sys.stderr)
        return 2
    man = manifest(args.command, cfg, reports, started, _now(), time.perf_counter() - t0)

    text = json.dumps(man, indent=2, sort_keys=True)
    if args_out is not None:
        args_out.write_text(text + "\n")
    elif args.command != "render":
        print(text)
    if args.csv is not None:
        args.csv.write_text(csv_table(reports), newline="")
    for name, rep in reports.items():
        print(f"{name}: {'PASS' if rep.get('passed', True) else 'FAIL'}", file=sys.stderr)
    return 0 if man["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
