"""Command-line entry point."""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
from pathlib import Path

import mpmath

from ..config import SamplingConfig, collect_warnings, use_config
from ..expr import ParseError, PoleError, ResamplingExhausted, parse
from ..flags import DerivedFlag
from ..geometry import Distribution
from ..geometry.linalg import LinalgError
from ..sgs import DegenerateTau
from ..symmetry import QuotientError, TransversalityError
from . import report as R
from .fileformat import SystemFileError, load, loads

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_REGULARITY = 3
EXIT_INDETERMINATE = 4
EXIT_INTERNAL = 5

CONFIG_ENV = "GOURSATKIT_CONFIG"


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="sampling seed")
    common.add_argument("--samples", type=int, help="sample points per zero test")
    common.add_argument("--precision", type=int, help="working precision in decimal digits")
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    p = argparse.ArgumentParser(
        prog="goursatkit",
        description="Derived-flag analysis of control systems and their symmetry quotients.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="full analysis of one system")
    a.add_argument("file")
    s = sub.add_parser("symmetry", parents=[common], help="checks for one symmetry block")
    s.add_argument("file")
    s.add_argument("name")
    q = sub.add_parser("quotient", parents=[common], help="build and analyze a quotient")
    q.add_argument("file")
    q.add_argument("name")
    q.add_argument("qname")
    b = sub.add_parser("batch", parents=[common], help="one summary row per symmetry block")
    b.add_argument("file")
    b.add_argument("names", nargs="*")
    b.add_argument("--jobs", type=int, default=1, help="worker threads")
    g = sub.add_parser("sgs", parents=[common], help="S-G-S test on the dual Pfaffian system")
    g.add_argument("file")
    g.add_argument("--tau", help="time scale expression (default: the time coordinate)")
    return p


def _config_from_env() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    text = Path(path).read_text()
    # reuse the system-file reader on a config-only document
    stub = "[chart]\ntime = t\n[distribution]\nT = d_t\n" + text
    return loads(stub, source=path).config


def _resolve_config(args, sf) -> SamplingConfig:
    cfg = SamplingConfig()
    overrides = {}
    overrides.update(_config_from_env())
    overrides.update(sf.config)
    mapping = {"seed": "seed", "samples": "zero_samples", "rank_samples": "rank_samples", "precision": "precision"}
    for key, attr in (("seed", "seed"), ("samples", "samples"), ("precision", "precision")):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    return cfg.replace(**{mapping[k]: v for k, v in overrides.items()})


def _indeterminate(report: dict) -> bool:
    stack = [report]
    while stack:
        item = stack.pop()
        if isinstance(item, dict):
            if item.get("status") == "INDETERMINATE" or item.get("indeterminate") is True:
                return True
            stack.extend(item.values())
        elif isinstance(item, list):
            stack.extend(item)
    return False


def _batch(sf, names, jobs, cfg) -> dict:
    rep = R._header("batch", sf)
    names = list(names) if names else list(sf.symmetries)
    D = Distribution(sf.chart, sf.generators())
    flag = DerivedFlag(D)
    flag.refined_derived_type()

    def work(name):
        with use_config(cfg), collect_warnings() as log:
            row = R.batch_row(sf, D, flag, name)
        if log.items():
            row["warnings"] = log.items()
        return row

    if jobs > 1 and len(names) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(work, names))
    else:
        rows = [work(n) for n in names]
    rep["rows"] = rows
    return rep


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = _parser().parse_args(argv)
    try:
        sf = load(args.file)
        cfg = _resolve_config(args, sf)
    except (SystemFileError, ParseError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    # mpmath's precision is process-global; pin it before any worker starts
    mpmath.mp.dps = cfg.precision
    try:
        with use_config(cfg):
            if args.command == "analyze":
                report = R.analyze_report(sf)
            elif args.command == "symmetry":
                report = R.symmetry_report(sf, args.name)
            elif args.command == "quotient":
                report = R.quotient_report(sf, args.name, args.qname)
            elif args.command == "batch":
                report = _batch(sf, args.names, args.jobs, cfg)
            else:
                tau = parse(args.tau, sf.chart.symbols) if args.tau else None
                report = R.sgs_report(sf, tau)
    except (KeyError, ParseError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_PARSE
    except (ResamplingExhausted, PoleError, LinalgError, TransversalityError, QuotientError, DegenerateTau) as err:
        print(f"regularity failure: {err}", file=sys.stderr)
        return EXIT_REGULARITY
    except Exception as err:  # noqa: BLE001
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.json == "-":
        stdout.write(R.to_json(report))
    else:
        if args.json:
            Path(args.json).write_text(R.to_json(report))
        stdout.write(R.to_text(report))
    return EXIT_INDETERMINATE if _indeterminate(report) else EXIT_OK


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "EXIT_OK", "EXIT_PARSE", "EXIT_REGULARITY", "EXIT_INDETERMINATE", "EXIT_INTERNAL"]
