"""Benchmark harness behind the ``slimsell`` command.

Output CSVs (comma separated, header row, UTF-8). Columns whose name ends
in ``elapsed_ns`` carry wall-clock measurements; every other column is a
deterministic function of the configuration and seeds.
"""
from __future__ import annotations

import csv
import statistics
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .analysis import format_report_table, storage_report
from .bfs import BfsOptions, ConvergenceError, bfs_spmv, bfs_traditional, validate_parents
from .generators import make_rng, parse_spec
from .graph import Graph
from .layout import PAD, SlimSell, build_slimsell, dump, sell_from_slimsell, sigma_for
from .readers import load_graph
from .semiring import INF, VARIANTS, InconsistentDistancesError, get_semiring, with_pad_value

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2

ITERATION_COLUMNS = [
    "run_id", "graph_id", "n", "m", "layout", "C", "sigma", "semiring", "slimwork",
    "slimchunk_L", "schedule", "workers", "root", "repeat", "iteration", "elapsed_ns",
    "chunks_processed", "chunks_skipped", "subchunks_processed", "columns_processed",
    "max_unit_cells", "frontier_size",
]
SUMMARY_COLUMNS = [
    "group_id", "graph_id", "n", "m", "layout", "C", "sigma", "semiring", "slimwork",
    "slimchunk_L", "schedule", "workers", "root", "repeats", "iterations", "verified",
    "columns_processed", "total_elapsed_ns", "mean_elapsed_ns", "median_elapsed_ns",
    "min_elapsed_ns", "mean_iteration_elapsed_ns", "preprocess_elapsed_ns",
    "baseline_mean_elapsed_ns",
]
STORAGE_COLUMNS = [
    "graph_id", "n", "m", "C", "sigma", "n_chunks", "padding", "slimsell_cells",
    "slimsell_predicted", "sellcs_cells", "sellcs_predicted", "al_cells", "al_predicted",
    "csr_cells", "csr_predicted", "csr_with_val_cells", "ratio_slimsell_sellcs",
    "ratio_slimsell_al", "slimsell_beats_al",
]


class ConfigError(ValueError):
    pass


def resolve_graph(source: str) -> tuple[Graph, str]:
    """A path to an edge-list / MatrixMarket file, or a generator spec string."""
    path = Path(source)
    if path.exists():
        return load_graph(path), path.name
    try:
        spec = parse_spec(source)
    except ValueError as exc:
        raise ConfigError(f"{source!r} is neither a readable file nor a generator spec: {exc}") from None
    return spec.build(), spec.label()


def select_roots(g: Graph, root_spec, seed: int) -> list[int]:
    """``"<id>"`` or ``"random:k"``; random roots prefer non-isolated vertices."""
    root_spec = str(root_spec)
    if root_spec.startswith("random:"):
        k = int(root_spec.split(":", 1)[1])
        if k < 1:
            raise ConfigError("random root count must be >= 1")
        pool = np.flatnonzero(g.degrees() > 0)
        if not len(pool):
            pool = np.arange(g.n)
        if not len(pool):
            raise ConfigError("graph has no vertices")
        rng = make_rng(seed)
        return sorted(int(v) for v in rng.choice(pool, size=min(k, len(pool)), replace=False))
    try:
        r = int(root_spec)
    except ValueError:
        raise ConfigError(f"bad root {root_spec!r}") from None
    if not 0 <= r < g.n:
        raise ConfigError(f"root {r} out of range [0, {g.n})")
    return [r]


@dataclass
class RunConfig:
    graph: str
    chunk_heights: list[int] = field(default_factory=lambda: [8])
    sigmas: list[str] = field(default_factory=lambda: ["n"])
    semirings: list[str] = field(default_factory=lambda: ["tropical"])
    layouts: list[str] = field(default_factory=lambda: ["slimsell"])
    root: str = "0"
    seed: int = 0
    slimwork: bool = False
    slimchunk: int | None = None
    schedule: str = "static"
    workers: int = 1
    repeat: int = 1
    verify: bool = True
    out: Path | None = None
    inject_fault: str | None = None

    def validate(self):
        if self.repeat < 1:
            raise ConfigError("repeat must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if any(c < 1 for c in self.chunk_heights):
            raise ConfigError("chunk height must be >= 1")
        for s in self.semirings:
            if s not in VARIANTS:
                raise ConfigError(f"unknown semiring {s!r}")
        for lay in self.layouts:
            if lay not in ("slimsell", "sell"):
                raise ConfigError(f"unknown layout {lay!r}")
        if self.slimchunk is not None and self.slimchunk < 1:
            raise ConfigError("slimchunk L must be >= 1")
        if self.schedule not in ("static", "dynamic"):
            raise ConfigError("schedule must be static or dynamic")


@dataclass
class RunOutcome:
    iteration_rows: list[dict]
    summary_rows: list[dict]
    failures: list[str]

    @property
    def exit_code(self) -> int:
        return EXIT_VERIFY if self.failures else EXIT_OK


def corrupt_layout(layout: SlimSell) -> SlimSell:
    """Test hook: turn every second edge cell into padding."""
    col = layout.col.copy()
    real = np.flatnonzero(col != PAD)
    col[real[::2]] = PAD
    col.setflags(write=False)
    return replace(layout, col=col)


def _diff_report(expected, got, limit=5) -> str:
    bad = np.flatnonzero(expected != got)
    fmt = lambda v: "inf" if v == INF else str(int(v))  # noqa: E731
    shown = ", ".join(f"v{v}: expected {fmt(expected[v])} got {fmt(got[v])}" for v in bad[:limit])
    more = f" (+{len(bad) - limit} more)" if len(bad) > limit else ""
    return f"{len(bad)} distance mismatches: {shown}{more}"


def run(config: RunConfig) -> RunOutcome:
    config.validate()
    g, graph_id = resolve_graph(config.graph)
    roots = select_roots(g, config.root, config.seed)
    iter_rows, summary_rows, failures = [], [], []

    baseline = {}
    for r in roots:
        times = []
        for _ in range(config.repeat):
            t0 = time.perf_counter_ns()
            ref = bfs_traditional(g, r)
            times.append(time.perf_counter_ns() - t0)
        baseline[r] = (ref, statistics.fmean(times))

    run_id = group_id = 0
    for C in config.chunk_heights:
        for sigma_name in config.sigmas:
            sigma = sigma_for(sigma_name, g.n, C)
            t0 = time.perf_counter_ns()
            slim = build_slimsell(g, C, sigma)
            prep_slim = time.perf_counter_ns() - t0
            if config.inject_fault == "layout":
                slim = corrupt_layout(slim)
            for sname in config.semirings:
                s = get_semiring(sname)
                for lay_name in config.layouts:
                    prep = prep_slim
                    if lay_name == "sell":
                        t0 = time.perf_counter_ns()
                        pad = s.one if config.inject_fault == "pad" else s.pad_value
                        layout = sell_from_slimsell(slim, with_pad_value(s, pad))
                        prep += time.perf_counter_ns() - t0
                    else:
                        layout = slim
                    opts = BfsOptions(semiring=sname, slimwork=config.slimwork, slimchunk=config.slimchunk,
                                      schedule=config.schedule, workers=config.workers)
                    base = {
                        "graph_id": graph_id, "n": g.n, "m": g.m, "layout": lay_name, "C": C,
                        "sigma": layout.sigma, "semiring": sname, "slimwork": int(config.slimwork),
                        "slimchunk_L": config.slimchunk or 0, "schedule": config.schedule,
                        "workers": config.workers,
                    }
                    for r in roots:
                        totals, verified, res = [], True, None
                        for rep in range(config.repeat):
                            try:
                                res = bfs_spmv(layout, r, opts)
                            except (InconsistentDistancesError, ConvergenceError) as exc:
                                verified = False
                                failures.append(f"[{graph_id} {lay_name} C={C} sigma={layout.sigma} "
                                                f"{sname} root={r} repeat={rep}] engine error: {exc}")
                                run_id += 1
                                continue
                            for st in res.per_iter:
                                iter_rows.append({
                                    "run_id": run_id, **base, "root": r, "repeat": rep,
                                    "iteration": st.k, "elapsed_ns": st.elapsed_ns,
                                    "chunks_processed": st.chunks_processed,
                                    "chunks_skipped": st.chunks_skipped,
                                    "subchunks_processed": st.subchunks_processed,
                                    "columns_processed": st.columns_processed,
                                    "max_unit_cells": st.max_unit_cells,
                                    "frontier_size": st.frontier_size,
                                })
                            totals.append(res.elapsed_ns)
                            run_id += 1
                            if config.verify:
                                ref = baseline[r][0]
                                msg = None
                                if not np.array_equal(ref.d, res.d):
                                    msg = _diff_report(ref.d, res.d)
                                elif res.p is not None:
                                    msg = validate_parents(g, res.d, res.p)
                                if msg:
                                    verified = False
                                    failures.append(f"[{graph_id} {lay_name} C={C} sigma={layout.sigma} "
                                                    f"{sname} root={r} repeat={rep}] {msg}")
                        if res is None:
                            group_id += 1
                            continue
                        summary_rows.append({
                            "group_id": group_id, **base, "root": r, "repeats": config.repeat,
                            "iterations": res.iterations,
                            "verified": int(verified) if config.verify else "",
                            "columns_processed": sum(st.columns_processed for st in res.per_iter),
                            "total_elapsed_ns": sum(totals),
                            "mean_elapsed_ns": f"{statistics.fmean(totals):.1f}",
                            "median_elapsed_ns": f"{statistics.median(totals):.1f}",
                            "min_elapsed_ns": min(totals),
                            "mean_iteration_elapsed_ns": f"{sum(totals) / (config.repeat * res.iterations):.1f}",
                            "preprocess_elapsed_ns": prep,
                            "baseline_mean_elapsed_ns": f"{baseline[r][1]:.1f}",
                        })
                        group_id += 1

    outcome = RunOutcome(iter_rows, summary_rows, failures)
    if config.out is not None:
        write_csv(Path(config.out) / "iterations.csv", ITERATION_COLUMNS, iter_rows)
        write_csv(Path(config.out) / "summary.csv", SUMMARY_COLUMNS, summary_rows)
    return outcome


def write_csv(path: Path, columns: list[str], rows: list[dict]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def storage(graph_source: str, chunk_heights: list[int], sigmas: list[str], out: Path | None = None,
            stream=None) -> list[dict]:
    """Storage report per (C, sigma); prints a table and optionally writes ``storage.csv``."""
    stream = stream or sys.stdout
    g, graph_id = resolve_graph(graph_source)
    rows = []
    for C in chunk_heights:
        for name in sigmas:
            rep = storage_report(g, C, sigma_for(name, g.n, C))
            rows.append({"graph_id": graph_id, **rep.as_row()})
    cols = ["C", "sigma", "padding", "slimsell_cells", "sellcs_cells", "al_cells", "csr_cells",
            "csr_with_val_cells", "ratio_slimsell_sellcs", "ratio_slimsell_al", "slimsell_beats_al"]
    stream.write(f"graph {graph_id}: n={g.n} m={g.m}\n")
    stream.write(format_report_table(rows, cols))
    if out is not None:
        write_csv(Path(out) / "storage.csv", STORAGE_COLUMNS, rows)
    return rows


def dump_layout(graph_source: str, C: int, sigma: str, layout: str = "slimsell",
                semiring: str = "tropical") -> str:
    g, _ = resolve_graph(graph_source)
    slim = build_slimsell(g, C, sigma_for(sigma, g.n, C))
    if layout == "sell":
        return dump(sell_from_slimsell(slim, semiring))
    return dump(slim)
