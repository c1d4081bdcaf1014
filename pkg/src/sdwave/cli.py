"""``sdwave`` command line: symbol checks, remainder-rate sweeps, bound checks, full report.

Exit codes: 0 when every record passes or is observational, 1 on any failed
check, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, suites
from .config import ConfigError, load_config
from .report import RecordWriter, Report

COMMANDS = {
    "symbols": ("symbols",),
    "rates": ("rates",),
    "bounds": ("bounds",),
    "report": suites.SUITES,
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdwave", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--dim", type=int, help="space dimension (1, 2 or 3)")
    common.add_argument("--gamma", type=float, help="moment order γ >= 0")
    common.add_argument("--u0", help="initial displacement: JSON datum spec or path")
    common.add_argument("--u1", help="initial velocity: JSON datum spec or path")
    common.add_argument("--tmin", dest="t_min", type=float)
    common.add_argument("--tmax", dest="t_max", type=float)
    common.add_argument("--tpoints", dest="t_points", type=int)
    common.add_argument("--resolution", type=float, help="radial nodes per unit (must resolve t_max)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"))
    common.add_argument("--json", dest="fmt", action="store_const", const="json", help="same as --format json")
    common.add_argument("--out", help="write the report here (a .partial.jsonl journal is kept while running)")
    common.add_argument("--only", help="keep records whose id or anchor contains this substring")
    common.add_argument("--workers", type=int, help="worker processes (results do not depend on this)")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("symbols", parents=[common], help="symbol/ODE agreement, branch continuity, closed forms")
    sub.add_parser("rates", parents=[common], help="expansion remainder sweeps and rate fits")
    sub.add_parser("bounds", parents=[common], help="sandwich, optimality, lemma and quadrature checks")
    sub.add_parser("report", parents=[common], help="all suites in one document")
    verify = sub.add_parser("verify", parents=[common], help="run one named suite")
    verify.add_argument("suite", choices=suites.SUITES + ("all",))
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    overrides = {k: getattr(args, k) for k in ("dim", "gamma", "u0", "u1", "t_min", "t_max", "t_points",
                                              "resolution", "fmt", "out", "only", "workers")}
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"sdwave: configuration error: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify":
        chosen = suites.SUITES if args.suite == "all" else (args.suite,)
    else:
        chosen = COMMANDS[args.command]
    report = Report(config=cfg.echo())
    writer = RecordWriter(report, cfg.out, cfg.fmt)
    suites.run(chosen, cfg, writer.add)
    text = writer.finalize()
    if not cfg.out:
        sys.stdout.write(text)
    return 1 if report.failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
