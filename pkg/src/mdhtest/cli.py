"""
``mdhtest`` command-line interface.

Subcommands
-----------
test         test one series for the martingale difference hypothesis
correlogram  ACF / ADCF / AMDCF table with bootstrap critical values
simulate     Monte Carlo size/power experiment
dump         write a simulated series, one value per line
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ._errors import MdhError
from .analysis import StatConfig, correlogram, run_test
from .dgp import NAMES, simulate
from .io import ingest_series
from .montecarlo import PRESETS, ExperimentSpec, format_report, resolve_workers, run_experiment

CORRELOGRAM_FIELDS = ("lag", "acf", "adcf", "amdcf", "crit")


def _add_series_args(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("series source")
    src.add_argument("--input", help="data file (one value per line, or CSV with --column)")
    src.add_argument("--column", help="CSV column: header name or zero-based index")
    src.add_argument("--log-returns", action="store_true", help="convert levels to 100*log returns")
    src.add_argument("--square", action="store_true", help="square the series")
    src.add_argument("--dgp", type=int, choices=sorted(NAMES), help="simulate instead of reading")
    src.add_argument("--n", type=int, default=300, help="simulated sample size")
    src.add_argument("--burnin", type=int, help="simulation burn-in (default per process)")


def _add_output_args(p: argparse.ArgumentParser, formats=("text", "json")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdhtest", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test a single series")
    _add_series_args(t)
    t.add_argument("--stat", choices=["mn", "m99", "tn", "mwnf", "dn2"], default="mn")
    t.add_argument("--kernel", choices=["parzen", "bartlett"], default="parzen")
    t.add_argument("--lambda", dest="lam", type=float, default=0.4, help="bandwidth exponent: p = c n^lambda")
    t.add_argument("--bandwidth-scale", type=float, default=1.0, help="c in p = c n^lambda")
    t.add_argument("--bandwidth", type=float, help="raw bandwidth p (overrides --lambda)")
    t.add_argument("--pmax", type=int, default=3, help="truncation lag for mwnf")
    t.add_argument("--boot", choices=["aux", "mammen", "rademacher"], help="bootstrap scheme")
    t.add_argument("--reps", type=int, default=499, help="bootstrap replicates B")
    t.add_argument("--ln", type=float, default=0.0, help="auxiliary AR(1) dependence length")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--level", type=float, default=0.05)
    _add_output_args(t)

    c = sub.add_parser("correlogram", help="ACF/ADCF/AMDCF with bootstrap critical values")
    _add_series_args(c)
    c.add_argument("--max-lag", type=int, default=12)
    c.add_argument("--reps", type=int, default=499)
    c.add_argument("--ln", type=float, default=0.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--level", type=float, default=0.05)
    c.add_argument("--simultaneous", action="store_true", help="max-over-lags critical values")
    _add_output_args(c, ("csv", "json"))

    s = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    group = s.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="JSON experiment specification")
    group.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--seed", type=int, help="override the master seed")
    s.add_argument("--threads", type=int, default=1, help="worker processes (MDHTEST_THREADS overrides)")
    s.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    s.add_argument("--dry-run", action="store_true", help="validate the configuration and exit")
    _add_output_args(s, ("csv", "json"))

    d = sub.add_parser("dump", help="write a simulated series")
    d.add_argument("--dgp", type=int, choices=sorted(NAMES), required=True)
    d.add_argument("--n", type=int, default=300)
    d.add_argument("--burnin", type=int)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out")
    return parser


def _load_series(args) -> np.ndarray:
    if (args.input is None) == (args.dgp is None):
        raise MdhError("give exactly one of --input or --dgp")
    if args.input is not None:
        column = args.column
        if column is not None and column.lstrip("-").isdigit():
            column = int(column)
        return ingest_series(args.input, column, log_returns=args.log_returns, square=args.square)
    x = simulate(args.dgp, args.n, seed=args.seed, burnin=args.burnin)
    if args.log_returns:
        raise MdhError("--log-returns applies to price files, not simulated returns")
    return x * x if args.square else x


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_test(args) -> int:
    x = _load_series(args)
    cfg = StatConfig(
        stat=args.stat,
        kernel=args.kernel,
        lam=args.lam,
        bandwidth_scale=args.bandwidth_scale,
        bandwidth=args.bandwidth,
        pmax=args.pmax,
        scheme=args.boot,
        reps=args.reps,
        ln=args.ln,
    )
    report = run_test(x, cfg, seed=args.seed, level=args.level)
    if args.format == "json":
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    else:
        verdict = "reject" if report.reject else "do not reject"
        text = (
            f"statistic  {report.label}\n"
            f"n          {report.n}\n"
            f"value      {report.value:.6g}\n"
            f"p-value    {report.pvalue:.4f}\n"
            f"decision   {verdict} at level {report.level:g}\n"
        )
    _emit(text, args.out)
    return 0


def format_correlogram(rows, fmt: str = "csv") -> str:
    """Plot-ready correlogram table; the CSV header is fixed."""
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CORRELOGRAM_FIELDS)
    for r in rows:
        writer.writerow([r.lag, f"{r.acf:.6f}", f"{r.adcf:.6f}", f"{r.amdcf:.6f}", f"{r.crit:.6f}"])
    return buf.getvalue()


def cmd_correlogram(args) -> int:
    x = _load_series(args)
    rows = correlogram(x, args.max_lag, reps=args.reps, ln=args.ln, seed=args.seed,
                       level=args.level, simultaneous=args.simultaneous)
    _emit(format_correlogram(rows, args.format), args.out)
    return 0


def cmd_simulate(args) -> int:
    if args.config:
        spec = ExperimentSpec.load(args.config)
    else:
        spec = PRESETS[args.preset]()
    if args.seed is not None:
        spec = ExperimentSpec(spec.dgps, spec.sample_sizes, spec.stat_configs,
                              spec.mc_reps, spec.level, args.seed)
    workers = resolve_workers(args.threads)
    logging.getLogger(__name__).info(
        "%d cells, %d replications each, %d worker(s)", spec.n_cells, spec.mc_reps, workers)
    if args.dry_run:
        sys.stderr.write(f"configuration ok: {spec.n_cells} cells x {spec.mc_reps} replications\n")
        return 0
    report = run_experiment(spec, workers)
    _emit(format_report(report, args.format, include_timing=args.timing), args.out)
    return 0 if all(c.error is None for c in report.cells) else 1


def cmd_dump(args) -> int:
    x = simulate(args.dgp, args.n, seed=args.seed, burnin=args.burnin)
    _emit("".join(f"{v!r}\n" for v in x.tolist()), args.out)
    return 0


COMMANDS = {"test": cmd_test, "correlogram": cmd_correlogram, "simulate": cmd_simulate, "dump": cmd_dump}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (MdhError, OSError) as exc:
        sys.stderr.write(f"mdhtest: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
