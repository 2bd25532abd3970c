"""Algebraic BFS over SlimSell / Sell-C-sigma, and the queue-based reference BFS.

One iteration is level-synchronous: decide which chunks to skip (SlimWork),
split the remaining chunks into scheduling units (whole chunks, or column
segments of at most ``L`` columns with SlimChunk), compute per-unit partial
accumulators on the worker pool, then merge partials, post-process and test
convergence on the calling thread.
"""
from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import semiring as sr
from .graph import Graph
from .layout import SellCSigma, SlimSell, UnitPlan, _ranges, permute_out, segment_partials, unit_plan
from .semiring import INF, UNREACHED, get_semiring

STATIC = "static"
DYNAMIC = "dynamic"


@dataclass(frozen=True)
class BfsOptions:
    semiring: str = sr.TROPICAL
    slimwork: bool = False
    slimchunk: int | None = None  # max segment length L in columns; None = off
    schedule: str = STATIC
    workers: int = 1
    max_iterations: int | None = None  # default n + 1
    parents: bool = True

    def __post_init__(self):
        get_semiring(self.semiring)
        if self.slimchunk is not None and self.slimchunk < 1:
            raise ValueError("SlimChunk segment length L must be >= 1")
        if self.schedule not in (STATIC, DYNAMIC):
            raise ValueError(f"schedule must be {STATIC!r} or {DYNAMIC!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class IterationStats:
    k: int
    elapsed_ns: int = 0
    chunks_processed: int = 0
    chunks_skipped: int = 0
    subchunks_processed: int = 0
    columns_processed: int = 0  # sum of processed chunk columns (cells / C)
    max_unit_cells: int = 0  # largest per-scheduling-unit cell count
    frontier_size: int = 0

    def counters(self) -> tuple:
        """Everything except the timing, for determinism checks."""
        return (self.k, self.chunks_processed, self.chunks_skipped, self.subchunks_processed,
                self.columns_processed, self.max_unit_cells, self.frontier_size)


@dataclass
class BfsResult:
    root: int
    d: np.ndarray
    p: np.ndarray | None
    iterations: int
    per_iter: list[IterationStats] = field(default_factory=list)
    semiring: str = ""

    @property
    def elapsed_ns(self) -> int:
        return sum(it.elapsed_ns for it in self.per_iter)


class ConvergenceError(RuntimeError):
    """Iteration cap hit; carries the partial state and statistics."""

    def __init__(self, msg, state, per_iter):
        super().__init__(msg)
        self.state = state
        self.per_iter = per_iter


def plan_subchunks(layout, L: int | None) -> UnitPlan:
    """Cut every chunk's columns ``[0, cl[i])`` into consecutive pieces of at most ``L``."""
    return unit_plan(layout, L)


def _run_units(layout, s, vec, plan: UnitPlan, units, opts, pool):
    """Partial accumulators for ``units`` of ``plan``, in unit order regardless of schedule."""
    chunk, start, length = plan.chunk[units], plan.start[units], plan.length[units]
    acc = np.empty((len(units), layout.C), dtype=np.int64)
    if opts.schedule == STATIC:
        blocks = [b for b in np.array_split(np.arange(len(units)), opts.workers) if len(b)]

        def work(b):
            acc[b] = segment_partials(layout, s, vec, chunk[b], start[b], length[b])

        list(pool.map(work, blocks))
    else:
        counter = iter(range(len(units)))
        lock = threading.Lock()

        def worker():
            while True:
                with lock:
                    i = next(counter, None)
                if i is None:
                    return
                sl = slice(i, i + 1)
                acc[sl] = segment_partials(layout, s, vec, chunk[sl], start[sl], length[sl])

        for fut in [pool.submit(worker) for _ in range(opts.workers)]:
            fut.result()
    return acc


def bfs_step(layout: SlimSell, state: sr.IterationState, k: int, opts: BfsOptions,
             plan: UnitPlan | None = None, pool=None, skip=None):
    """Run iteration ``k`` from ``state``; returns ``(new_state, stats)``.

    ``skip`` overrides the SlimWork decision with an explicit per-chunk mask.
    """
    s = get_semiring(opts.semiring)
    C, n = layout.C, layout.n
    if plan is None:
        plan = unit_plan(layout, opts.slimchunk)
    stats = IterationStats(k)
    operand = sr.spmv_operand(s, state)

    if skip is None and opts.slimwork:
        skip = sr.skip_mask(s, state, C, n)
    n_skip = int(np.count_nonzero(skip)) if skip is not None else 0
    active = None if n_skip == 0 else ~skip
    lengths = None if active is None else plan.length[active[plan.chunk]]

    out = operand.copy()
    if pool is None:
        acc = plan.partials(s, operand, active)
        if plan.L is None:
            # one unit per chunk, in chunk order: slots line up with rows
            out = s.plus(out, acc)
        else:
            s.plus.at(out, plan.slot_row, acc)
    else:
        units = np.arange(len(plan)) if active is None else np.flatnonzero(active[plan.chunk])
        acc = _run_units(layout, s, operand, plan, units, opts, pool)
        rows = (plan.chunk[units][:, None] * C + np.arange(C)).ravel()
        s.plus.at(out, rows, acc.ravel())
    # barrier: skipped chunks carry their previous values
    if n_skip:
        carried = np.repeat(skip, C)
        out[carried] = state.x[carried]

    new = sr.post_process(s, state, out, k)
    stats.chunks_processed = layout.n_chunks - n_skip
    stats.chunks_skipped = n_skip
    if lengths is None:
        n_units, stats.columns_processed, longest = len(plan), plan.total_columns, plan.max_length
    else:
        n_units, stats.columns_processed = len(lengths), int(lengths.sum())
        longest = int(lengths.max()) if len(lengths) else 0
    if plan.L is not None:
        stats.subchunks_processed = n_units
    stats.max_unit_cells = longest * C
    if s.name == sr.TROPICAL:
        stats.frontier_size = int(np.count_nonzero(sr.newly_reached(state, new)))
    else:
        stats.frontier_size = int(np.count_nonzero(new.f))
    return new, stats


def bfs_spmv(layout: SlimSell, root: int, opts: BfsOptions | None = None, **kw) -> BfsResult:
    """Algebraic BFS from ``root`` (original vertex ID).

    Distances and parents come back in original IDs; unreached vertices have
    distance ``INF`` and parent ``UNREACHED``. Sel-max parents come from the
    product itself (largest-ID frontier neighbor wins); the other variants
    derive them from distances with :func:`semiring.dp_transform`.
    """
    opts = BfsOptions(**kw) if opts is None else opts
    s = get_semiring(opts.semiring)
    if isinstance(layout, SellCSigma) and layout.semiring.name != s.name:
        raise ValueError(f"layout values built for {layout.semiring.name}, BFS asked for {s.name}")
    n = layout.n
    if not 0 <= root < n:
        raise ValueError(f"root {root} out of range [0, {n})")
    cap = opts.max_iterations if opts.max_iterations is not None else n + 1
    plan = unit_plan(layout, opts.slimchunk)

    state = sr.init_state(s, n, int(layout.inv_perm[root]), layout.n_padded)
    per_iter = []
    pool = ThreadPoolExecutor(opts.workers) if opts.workers > 1 else None
    try:
        converged = False
        for k in range(1, cap + 1):
            t0 = time.perf_counter_ns()
            new, stats = bfs_step(layout, state, k, opts, plan, pool)
            done = sr.is_converged(s, state, new)
            stats.elapsed_ns = time.perf_counter_ns() - t0
            per_iter.append(stats)
            state = new
            if done:
                converged = True
                break
    finally:
        if pool is not None:
            pool.shutdown()
    if not converged:
        raise ConvergenceError(f"no convergence within {cap} iterations", state, per_iter)

    d = permute_out(state.d[:n], layout.inv_perm)
    if s.name == sr.SELMAX:
        pp = permute_out(state.p[:n], layout.inv_perm)
        p = np.where(pp > 0, layout.perm[np.maximum(pp - 1, 0)], UNREACHED)
    elif opts.parents:
        p = sr.dp_transform(layout.graph, d)
    else:
        p = None
    return BfsResult(root, d, p, len(per_iter), per_iter, s.name)


def bfs_traditional(g: Graph, root: int) -> BfsResult:
    """Level-synchronous queue BFS on CSR.

    Each level expands the whole queue at once. A vertex discovered by
    several queue members takes the smallest ID as parent. The final level
    expansion that finds nothing is counted as an iteration, matching the
    detection step of the algebraic engine.
    """
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range [0, {g.n})")
    csr = g.csr
    deg = csr.degrees()
    d = np.full(g.n, INF, dtype=np.int64)
    p = np.full(g.n, UNREACHED, dtype=np.int64)
    d[root], p[root] = 0, root
    queue = np.array([root], dtype=np.int64)
    per_iter = []
    k = 0
    while len(queue):
        k += 1
        t0 = time.perf_counter_ns()
        lens = deg[queue]
        nbr = csr.col[_ranges(csr.row[queue], lens)]
        src = np.repeat(queue, lens)
        fresh = d[nbr] == INF
        nbr, src = nbr[fresh], src[fresh]
        order = np.lexsort((src, nbr))
        nbr, src = nbr[order], src[order]
        queue, first = np.unique(nbr, return_index=True)
        d[queue] = k
        p[queue] = src[first]
        per_iter.append(IterationStats(k, time.perf_counter_ns() - t0, frontier_size=len(queue)))
    return BfsResult(root, d, p, k, per_iter, "traditional")


def validate_parents(g: Graph, d, p) -> str | None:
    """Check ``p`` is a BFS tree for distances ``d``; returns a message or None."""
    d = np.asarray(d)
    p = np.asarray(p)
    if len(d) != g.n or len(p) != g.n:
        return "vector length does not match the graph"
    roots = (d == 0).nonzero()[0]
    if len(roots) != 1 or p[roots[0]] != roots[0]:
        return "root must be the unique distance-0 vertex and self-parented"
    reached = d != INF
    if np.count_nonzero(p[~reached] != UNREACHED):
        return "unreached vertex has a parent"
    reached[roots[0]] = False
    v = reached.nonzero()[0]
    if not len(v):
        return None
    pv = p[v]
    if np.count_nonzero((pv < 0) | (pv >= g.n)):
        return "reached vertex without a valid parent"
    if np.count_nonzero(d[pv] != d[v] - 1):
        return "parent is not one level closer"
    keys = g.csr.edge_keys
    want = v * g.n + pv
    pos = np.searchsorted(keys, want)
    if pos[-1] >= len(keys) or np.count_nonzero(keys[pos] != want):
        return "parent is not a neighbor"
    return None


def eccentricity(g: Graph, root: int) -> int:
    d = bfs_traditional(g, root).d
    return int(d[d != INF].max())
