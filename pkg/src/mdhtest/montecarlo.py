"""
Monte Carlo size/power harness.

An experiment sweeps ``DGP x sample size x statistic configuration``. The
unit of work is one Monte Carlo replication of one ``(DGP, n)`` pair: the
series is simulated once and every statistic configuration is evaluated
on it, so configurations are compared on common data.

Seeds are derived, never drawn:

* data seed      = H(master, DGP, n, rep)
* bootstrap seed = H(master, DGP, n, config, rep)

where ``H`` hashes the coordinates with BLAKE2b. Any cell or replication
can be re-run alone, and the report is independent of the worker count.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ._errors import MdhError
from .analysis import StatConfig, compute_pvalue
from .dgp import ConstantProcess, DgpSpec

logger = logging.getLogger(__name__)

# one n x n float64 matrix per lag is live at a time
MAX_N = 20_000


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary printable coordinates."""
    key = "|".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _dgp_key(dgp) -> str:
    if isinstance(dgp, ConstantProcess):
        return f"const:{dgp.value!r}"
    return f"{dgp.id}:{dgp.effective_params}:{dgp.effective_burnin}"


def _dgp_from_obj(obj):
    if isinstance(obj, (DgpSpec, ConstantProcess)):
        return obj
    if isinstance(obj, int):
        return DgpSpec(obj)
    if isinstance(obj, dict):
        if "constant" in obj:
            return ConstantProcess(float(obj["constant"]))
        params = obj.get("params")
        return DgpSpec(int(obj["id"]), burnin=obj.get("burnin"),
                       params=tuple(params) if params is not None else None)
    raise MdhError(f"cannot interpret DGP entry {obj!r}")


def _dgp_to_obj(dgp):
    if isinstance(dgp, ConstantProcess):
        return {"constant": dgp.value}
    return {"id": dgp.id, "burnin": dgp.burnin, "params": list(dgp.params) if dgp.params else None}


@dataclass(frozen=True)
class ExperimentSpec:
    dgps: tuple
    sample_sizes: tuple[int, ...]
    stat_configs: tuple[StatConfig, ...]
    mc_reps: int = 200
    level: float = 0.05
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dgps", tuple(_dgp_from_obj(d) for d in self.dgps))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "stat_configs", tuple(
            c if isinstance(c, StatConfig) else StatConfig.from_dict(c) for c in self.stat_configs))
        if self.mc_reps < 1:
            raise MdhError("mc_reps must be positive")
        if not 0.0 < self.level < 1.0:
            raise MdhError("level must lie in (0, 1)")
        if not 0 <= self.master_seed < 2**64:
            raise MdhError("master_seed must be an unsigned 64-bit integer")
        for n in self.sample_sizes:
            if not 4 <= n <= MAX_N:
                raise MdhError(f"sample size {n} outside [4, {MAX_N}]")
        labels = [c.label for c in self.stat_configs]
        if len(set(labels)) != len(labels):
            raise MdhError("statistic configurations must have distinct labels")
        dgp_labels = [d.label for d in self.dgps]
        if len(set(dgp_labels)) != len(dgp_labels):
            raise MdhError("DGP entries must have distinct labels")

    @property
    def n_cells(self) -> int:
        return len(self.dgps) * len(self.sample_sizes) * len(self.stat_configs)

    def to_dict(self) -> dict:
        return {
            "dgps": [_dgp_to_obj(d) for d in self.dgps],
            "sample_sizes": list(self.sample_sizes),
            "stat_configs": [c.to_dict() for c in self.stat_configs],
            "mc_reps": self.mc_reps,
            "level": self.level,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        known = {"dgps", "sample_sizes", "stat_configs", "mc_reps", "level", "master_seed"}
        unknown = set(d) - known
        if unknown:
            raise MdhError(f"unknown experiment keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class CellResult:
    dgp: str
    dgp_id: int
    n: int
    config: str
    rejections: int = 0
    reps: int = 0
    error: str | None = None

    @property
    def rate(self) -> float | None:
        if self.error is not None or self.reps == 0:
            return None
        return self.rejections / self.reps


@dataclass
class ExperimentReport:
    cells: list[CellResult] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def rate(self, dgp: str, n: int, config: str) -> float | None:
        for c in self.cells:
            if (c.dgp, c.n, c.config) == (dgp, n, config):
                return c.rate
        raise KeyError((dgp, n, config))


def run_task(args):
    """One replication of one (DGP, n) pair across all configurations."""
    dgp, n, rep, configs, master_seed = args
    key = _dgp_key(dgp)
    try:
        x = dgp.with_n_seed(n, derive_seed(master_seed, "data", key, n, rep)).generate()
    except Exception as exc:  # reported per cell
        return [f"{type(exc).__name__}: {exc}"] * len(configs)
    out = []
    for cfg in configs:
        try:
            seed = derive_seed(master_seed, "boot", key, n, cfg.label, rep)
            out.append(compute_pvalue(x, cfg, seed)[1])
        except Exception as exc:
            out.append(f"{type(exc).__name__}: {exc}")
    return out


def plan_tasks(spec: ExperimentSpec) -> list[tuple]:
    return [
        (dgp, n, rep, spec.stat_configs, spec.master_seed)
        for dgp in spec.dgps
        for n in spec.sample_sizes
        for rep in range(spec.mc_reps)
    ]


def resolve_workers(threads: int | None = None) -> int:
    env = os.environ.get("MDHTEST_THREADS")
    if env:
        threads = int(env)
    return max(1, threads or 1)


def run_experiment(spec: ExperimentSpec, threads: int | None = None) -> ExperimentReport:
    """Run every cell of ``spec`` and collect rejection rates.

    A replication whose statistic fails marks its cell as failed; other
    cells are unaffected.
    """
    workers = resolve_workers(threads)
    tasks = plan_tasks(spec)
    start = time.perf_counter()
    logger.info("running %d cells x %d replications on %d worker(s)",
                spec.n_cells, spec.mc_reps, workers)
    if workers == 1:
        results = [run_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_task, tasks, chunksize=chunk))

    cells = {}
    for dgp in spec.dgps:
        for n in spec.sample_sizes:
            for cfg in spec.stat_configs:
                cells[(dgp.label, n, cfg.label)] = CellResult(dgp.label, dgp.id, n, cfg.label)
    for (dgp, n, _rep, configs, _seed), pvals in zip(tasks, results):
        for cfg, p in zip(configs, pvals):
            cell = cells[(dgp.label, n, cfg.label)]
            if isinstance(p, str):
                if cell.error is None:
                    cell.error = p
                continue
            cell.reps += 1
            cell.rejections += p <= spec.level
    for cell in cells.values():
        if cell.error is not None:
            logger.error("cell %s n=%d %s failed: %s", cell.dgp, cell.n, cell.config, cell.error)

    metadata = {
        "master_seed": spec.master_seed,
        "mc_reps": spec.mc_reps,
        "level": spec.level,
        "spec": spec.to_dict(),
        "wall_time": time.perf_counter() - start,
        "workers": workers,
    }
    return ExperimentReport(list(cells.values()), metadata)


def _column_key(cell: CellResult) -> str:
    return f"{cell.dgp} n={cell.n}"


def format_report(report: ExperimentReport, fmt: str = "csv", *, include_timing: bool = False) -> str:
    """Render ``report`` as a wide CSV table or as JSON.

    CSV rows are statistic configurations and columns ``DGP x n``, with
    rates x100 to one decimal. Timing fields are omitted unless
    ``include_timing`` is set, so reruns produce identical output.
    """
    if fmt == "json":
        meta = dict(report.metadata)
        if not include_timing:
            meta.pop("wall_time", None)
            meta.pop("workers", None)
        payload = {
            "metadata": meta,
            "cells": [
                {"dgp": c.dgp, "dgp_id": c.dgp_id, "n": c.n, "config": c.config,
                 "rejections": c.rejections, "reps": c.reps, "rate": c.rate, "error": c.error}
                for c in report.cells
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt != "csv":
        raise MdhError(f"unknown report format {fmt!r}")

    columns, rows = [], []
    for c in report.cells:
        if _column_key(c) not in columns:
            columns.append(_column_key(c))
        if c.config not in rows:
            rows.append(c.config)
    table = {(c.config, _column_key(c)): c for c in report.cells}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["config", *columns])
    for row in rows:
        line = [row]
        for col in columns:
            cell = table.get((row, col))
            if cell is None:
                line.append("")
            elif cell.rate is None:
                line.append("ERR" if cell.error else "")
            else:
                line.append(f"{100 * cell.rate:.1f}")
        writer.writerow(line)
    return buf.getvalue()


def write_report(report: ExperimentReport, path, fmt: str = "csv", *, include_timing: bool = False) -> None:
    Path(path).write_text(format_report(report, fmt, include_timing=include_timing))


def read_report(path) -> ExperimentReport:
    payload = json.loads(Path(path).read_text())
    cells = [
        CellResult(c["dgp"], c["dgp_id"], c["n"], c["config"], c["rejections"], c["reps"], c["error"])
        for c in payload["cells"]
    ]
    return ExperimentReport(cells, payload["metadata"])


def _mn_grid(ln: float, reps: int) -> list[StatConfig]:
    return [
        StatConfig("mn", kernel, lam, reps=reps, ln=ln)
        for kernel in ("parzen", "bartlett")
        for lam in (0.2, 0.4, 0.6)
    ]


def full_preset(master_seed: int = 0) -> ExperimentSpec:
    """The full size/power study: 10 DGPs, n = 100 and 300, 1000 replications, B = 499."""
    reps = 499
    configs = (
        _mn_grid(0.0, reps)
        + [StatConfig("mwnf", pmax=p, reps=reps) for p in (1, 3, 6)]
        + [StatConfig("dn2", reps=reps)]
        + _mn_grid(7.0, reps)
    )
    return ExperimentSpec(tuple(range(1, 11)), (100, 300), tuple(configs),
                          mc_reps=1000, level=0.05, master_seed=master_seed)


def desk_preset(master_seed: int = 0) -> ExperimentSpec:
    """A few representative cells at 200 replications and B = 199."""
    reps = 199
    configs = (
        StatConfig("mn", "parzen", 0.2, reps=reps),
        StatConfig("mn", "parzen", 0.4, reps=reps),
        StatConfig("mn", "parzen", 0.4, reps=reps, ln=7.0),
        StatConfig("mwnf", pmax=3, reps=reps),
    )
    return ExperimentSpec((1, 6, 9), (100,), configs, mc_reps=200, level=0.05,
                          master_seed=master_seed)


PRESETS = {"full": full_preset, "desk": desk_preset}
