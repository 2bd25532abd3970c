"""Sell-C-sigma and SlimSell chunked layouts and the semiring SpMV kernel.

Rows are grouped into chunks of ``C`` consecutive (sorted) rows and each
chunk is stored column-major, padded to its longest row: entry ``k`` of
lane ``j`` in chunk ``i`` lives at ``cs[i] + k*C + j``. SlimSell drops the
value array and marks padding with ``-1`` in ``col``.

Vertices are relabeled symmetrically by the sort permutation, so both row
order and neighbor IDs are in permuted space. ``perm[new] = old`` and
``inv_perm[old] = new``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .graph import Graph
from .semiring import INF, Semiring, get_semiring

PAD = -1


class LayoutParameterError(ValueError):
    pass


@dataclass(frozen=True)
class SortPlan:
    sigma: int
    perm: np.ndarray

    @cached_property
    def inv_perm(self) -> np.ndarray:
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return inv


def effective_sigma(n: int, C: int, sigma: int) -> int:
    """Normalize the sorting scope.

    ``1`` means no sorting. Larger values are rounded up to a multiple of
    ``C`` and capped at the padded row count, which is a full sort.
    """
    if C <= 0 or sigma <= 0:
        raise LayoutParameterError(f"C and sigma must be positive (got C={C}, sigma={sigma})")
    if sigma == 1:
        return 1
    n_padded = -(-n // C) * C
    sigma = -(-sigma // C) * C
    return max(1, min(sigma, n_padded)) if n_padded else 1


def sort_plan(degrees: np.ndarray, C: int, sigma: int) -> SortPlan:
    """Sort rows by descending length inside each window of ``sigma`` rows.

    Ties keep ascending original ID, so the result is deterministic.
    """
    n = len(degrees)
    sigma = effective_sigma(n, C, sigma)
    ids = np.arange(n)
    if sigma == 1:
        return SortPlan(1, ids)
    window = ids // sigma
    perm = np.lexsort((ids, -np.asarray(degrees), window))
    return SortPlan(sigma, perm)


@dataclass(frozen=True, eq=False)
class SlimSell:
    """Chunked, column-major adjacency structure without a value array."""

    n: int
    C: int
    sigma: int
    col: np.ndarray = field(repr=False)
    cs: np.ndarray = field(repr=False)
    cl: np.ndarray = field(repr=False)
    perm: np.ndarray = field(repr=False)
    inv_perm: np.ndarray = field(repr=False)

    @property
    def n_chunks(self) -> int:
        return len(self.cl)

    @property
    def n_padded(self) -> int:
        return self.n_chunks * self.C

    @property
    def padding(self) -> int:
        """P: number of padding cells in ``col``."""
        return int(np.count_nonzero(self.col == PAD))

    @property
    def nnz(self) -> int:
        return len(self.col) - self.padding

    @property
    def m(self) -> int:
        return self.nnz // 2

    @cached_property
    def chunk_end(self) -> np.ndarray:
        return self.cs + self.C * self.cl

    @cached_property
    def entry_row(self) -> np.ndarray:
        """Permuted row index of every cell of ``col``."""
        chunk = np.repeat(np.arange(self.n_chunks), self.C * self.cl)
        lane = (np.arange(len(self.col)) - self.cs[chunk]) % self.C
        return chunk * self.C + lane

    @cached_property
    def graph(self) -> Graph:
        """Decode the layout back into a Graph in ORIGINAL vertex IDs."""
        real = self.col != PAD
        rows = self.entry_row[real]
        cols = self.col[real]
        return Graph.from_pairs(self.n, np.column_stack([self.perm[rows], self.perm[cols]]))

    def permuted_adjacency(self) -> list[set[int]]:
        """Neighbor sets per permuted row, read back through chunk/lane addressing."""
        adj = [set() for _ in range(self.n_padded)]
        for i in range(self.n_chunks):
            for k in range(int(self.cl[i])):
                for j in range(self.C):
                    c = int(self.col[self.cs[i] + k * self.C + j])
                    if c != PAD:
                        adj[i * self.C + j].add(c)
        return adj

    def storage_cells(self) -> int:
        return storage_cells(self)


@dataclass(frozen=True, eq=False)
class SellCSigma(SlimSell):
    """Sell-C-sigma: the SlimSell layout plus an explicit value array.

    ``col`` keeps the ``-1`` markers only so the two layouts share one
    gather path; the kernel never inspects them here, the values do the work.
    """

    val: np.ndarray = field(default=None, repr=False)
    semiring: Semiring | None = None


def build_slimsell(g: Graph, C: int, sigma: int) -> SlimSell:
    """Build the SlimSell layout of ``g`` with chunk height ``C`` and sort scope ``sigma``."""
    if C <= 0 or sigma <= 0:
        raise LayoutParameterError(f"C and sigma must be positive (got C={C}, sigma={sigma})")
    n = g.n
    deg = g.degrees()
    plan = sort_plan(deg, C, sigma)
    perm, inv = plan.perm, plan.inv_perm
    n_chunks = -(-n // C)
    n_padded = n_chunks * C

    row_len = np.zeros(n_padded, dtype=np.int64)
    row_len[:n] = deg[perm]
    cl = row_len.reshape(n_chunks, C).max(axis=1) if n_chunks else np.zeros(0, dtype=np.int64)
    cs = np.zeros(n_chunks, dtype=np.int64)
    if n_chunks:
        np.cumsum(C * cl[:-1], out=cs[1:])
    total = int(C * cl.sum())

    col = np.full(total, PAD, dtype=np.int64)
    if g.m:
        src, dst = g.directed_pairs()
        r, c = inv[src], inv[dst]
        order = np.lexsort((c, r))
        r, c = r[order], c[order]
        row_start = np.zeros(n_padded + 1, dtype=np.int64)
        np.cumsum(row_len, out=row_start[1:])
        k = np.arange(len(r)) - row_start[r]
        chunk, lane = r // C, r % C
        col[cs[chunk] + k * C + lane] = c

    for a in (col, cs, cl, perm, inv):
        a.setflags(write=False)
    return SlimSell(n, C, plan.sigma, col, cs, cl, perm, inv)


def build_sell_c_sigma(g: Graph, C: int, sigma: int, semiring) -> SellCSigma:
    """Sell-C-sigma with the semiring's edge value at edges and pad value at padding."""
    s = get_semiring(semiring)
    slim = build_slimsell(g, C, sigma)
    return sell_from_slimsell(slim, s)


def sell_from_slimsell(slim: SlimSell, semiring) -> SellCSigma:
    s = get_semiring(semiring)
    val = np.where(slim.col == PAD, np.int64(s.pad_value), np.int64(s.edge_value)).astype(np.int64)
    val.setflags(write=False)
    return SellCSigma(slim.n, slim.C, slim.sigma, slim.col, slim.cs, slim.cl,
                      slim.perm, slim.inv_perm, val=val, semiring=s)


def _ranges(starts: np.ndarray, lens: np.ndarray) -> np.ndarray:
    """Concatenation of ``arange(s, s + l)`` for each pair, vectorized."""
    total = int(lens.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    offs = np.cumsum(lens) - lens
    return np.repeat(starts - offs, lens) + np.arange(total)


def segment_partials(layout: SlimSell, semiring, vec: np.ndarray,
                     chunks: np.ndarray, start: np.ndarray, length: np.ndarray) -> np.ndarray:
    """Per-lane partial accumulators for a batch of (chunk, column range) segments.

    Segment ``t`` covers columns ``start[t] .. start[t]+length[t]-1`` of chunk
    ``chunks[t]``; its cells are contiguous in memory. Each accumulator is
    seeded with the additive identity. Returns shape ``(len(chunks), C)``.
    """
    s = get_semiring(semiring)
    C = layout.C
    nseg = len(chunks)
    acc = np.full(nseg * C, s.zero, dtype=np.int64)
    if nseg == 0:
        return acc.reshape(0, C)
    first = layout.cs[chunks] + start * C
    lens = length * C
    idx = _ranges(first, lens)
    if len(idx) == 0:
        return acc.reshape(nseg, C)
    seg = np.repeat(np.arange(nseg), lens)
    lane = (idx - first[seg]) % C
    cols = layout.col[idx]
    pad = cols == PAD
    gathered = vec[np.where(pad, 0, cols)]
    if isinstance(layout, SellCSigma):
        contrib = s.times(gathered, layout.val[idx])
    else:
        contrib = s.times(gathered, np.int64(s.edge_value))
        contrib = np.where(pad, np.int64(s.pad_value), contrib)
    s.plus.at(acc, seg * C + lane, contrib)
    return acc.reshape(nseg, C)


class UnitPlan:
    """Precomputed gather/scatter indices for one split of a layout into work units.

    A unit is a whole chunk (``L=None``) or a column segment of at most ``L``
    columns (SlimChunk). Built once per layout and reused every iteration.
    """

    def __init__(self, layout: SlimSell, L: int | None = None):
        C = layout.C
        cl = np.asarray(layout.cl, dtype=np.int64)
        if L is None:
            chunk = np.arange(layout.n_chunks)
            start = np.zeros_like(chunk)
            length = cl.copy()
        else:
            if L < 1:
                raise ValueError("L must be >= 1")
            nseg = -(-cl // L)
            chunk = np.repeat(np.arange(len(cl)), nseg)
            local = np.arange(int(nseg.sum())) - np.repeat(np.cumsum(nseg) - nseg, nseg)
            start = local * L
            length = np.minimum(L, cl[chunk] - start)
        self.L, self.C = L, C
        self.chunk, self.start, self.length = chunk, start, length
        first = layout.cs[chunk] + start * C
        lens = length * C
        idx = _ranges(first, lens)
        unit = np.repeat(np.arange(len(chunk)), lens)
        cols = layout.col[idx]
        self.pad = cols == PAD
        self.gather = np.where(self.pad, 0, cols)
        self.slot = unit * C + (idx - first[unit]) % C
        self.entry_chunk = chunk[unit]
        self.val = layout.val[idx] if isinstance(layout, SellCSigma) else None
        self.slot_row = (chunk[:, None] * C + np.arange(C)).ravel()
        # edge cells only: padding adds the identity whenever pad_value == zero
        keep = np.flatnonzero(~self.pad)
        keep = keep[np.argsort(self.slot[keep], kind="stable")]
        self.edge_gather, self.edge_slot, self.edge_chunk = self.gather[keep], self.slot[keep], self.entry_chunk[keep]
        # slot-sorted edge cells allow segmented reductions instead of scatter
        self.edge_slots, self.slot_start, self.slot_count = np.unique(
            self.edge_slot, return_index=True, return_counts=True)
        self.slot_chunk = chunk[self.edge_slots // C]
        self.total_columns = int(length.sum())
        self.max_length = int(length.max()) if len(length) else 0

    # above this many edge cells a segmented reduce beats ufunc.at
    SCATTER_MAX = 1024

    def __len__(self):
        return len(self.chunk)

    def segments(self, i: int) -> list[tuple[int, int]]:
        """``(column_start, column_len)`` pieces of chunk ``i``, in order."""
        sel = self.chunk == i
        return [(int(a), int(b)) for a, b in zip(self.start[sel], self.length[sel])]

    def partials(self, semiring, vec: np.ndarray, active_chunks: np.ndarray | None = None) -> np.ndarray:
        """Flat ``(units * C)`` accumulators; units of inactive chunks stay at zero."""
        s = get_semiring(semiring)
        acc = np.empty(len(self.chunk) * self.C, dtype=np.int64)
        acc.fill(s.zero)
        if self.val is None and s.pad_value == s.zero:
            gather, slot = self.edge_gather, self.edge_slot
            if len(gather) < self.SCATTER_MAX:
                if active_chunks is not None:
                    m = active_chunks[self.edge_chunk]
                    gather, slot = gather[m], slot[m]
                s.plus.at(acc, slot, s.times(vec[gather], np.int64(s.edge_value)))
                return acc
            slots, starts = self.edge_slots, self.slot_start
            if active_chunks is not None:
                gather = gather[active_chunks[self.edge_chunk]]
                keep = active_chunks[self.slot_chunk]
                slots, counts = slots[keep], self.slot_count[keep]
                starts = np.cumsum(counts) - counts
            if len(gather):
                acc[slots] = s.plus.reduceat(s.times(vec[gather], np.int64(s.edge_value)), starts)
            return acc
        if active_chunks is None:
            gather, pad, slot, val = self.gather, self.pad, self.slot, self.val
        else:
            m = active_chunks[self.entry_chunk]
            gather, pad, slot = self.gather[m], self.pad[m], self.slot[m]
            val = None if self.val is None else self.val[m]
        gathered = vec[gather]
        if val is not None:
            contrib = s.times(gathered, val)
        else:
            contrib = s.times(gathered, np.int64(s.edge_value))
            contrib[pad] = s.pad_value
        s.plus.at(acc, slot, contrib)
        return acc


def unit_plan(layout: SlimSell, L: int | None = None) -> UnitPlan:
    """Cached :class:`UnitPlan` for ``layout``."""
    cache = layout.__dict__.setdefault("_unit_plans", {})
    if L not in cache:
        cache[L] = UnitPlan(layout, L)
    return cache[L]


def combine_partials(semiring, partials) -> np.ndarray:
    """Merge per-segment accumulators of one chunk with the semiring's plus."""
    s = get_semiring(semiring)
    partials = np.atleast_2d(np.asarray(partials, dtype=np.int64))
    return s.plus.reduce(partials, axis=0)


def spmv_step(layout: SlimSell, semiring, x_prev, chunks=None) -> np.ndarray:
    """One semiring product ``out = x_prev (+) A (x) x_prev`` over selected chunks.

    Rows outside ``chunks`` keep their ``x_prev`` value. ``x_prev`` is in
    permuted space and has length ``n_padded``.
    """
    s = get_semiring(semiring)
    x_prev = np.asarray(x_prev, dtype=np.int64)
    if len(x_prev) != layout.n_padded:
        raise ValueError(f"vector length {len(x_prev)} != n_padded {layout.n_padded}")
    chunks = np.arange(layout.n_chunks) if chunks is None else np.asarray(chunks, dtype=np.int64)
    out = x_prev.copy()
    acc = segment_partials(layout, s, x_prev, chunks, np.zeros_like(chunks), layout.cl[chunks])
    rows = (chunks[:, None] * layout.C + np.arange(layout.C)).ravel()
    out[rows] = s.plus(out[rows], acc.ravel())
    return out


def permute_in(v, perm, n_padded: int | None = None, fill=None) -> np.ndarray:
    """Original-ID vector to permuted space, optionally padded with ``fill``."""
    v = np.asarray(v)
    perm = np.asarray(perm)
    out = v[perm]
    if n_padded is not None and n_padded > len(out):
        out = np.concatenate([out, np.full(n_padded - len(out), fill, dtype=out.dtype)])
    return out


def permute_out(v, inv_perm) -> np.ndarray:
    """Permuted-space vector back to original IDs; padding rows are dropped."""
    v = np.asarray(v)
    return v[np.asarray(inv_perm)]


def storage_cells(layout: SlimSell) -> int:
    """Words used: ``col`` (+ ``val`` for Sell-C-sigma) + ``cs`` + ``cl``."""
    cells = len(layout.col) + len(layout.cs) + len(layout.cl)
    if isinstance(layout, SellCSigma):
        cells += len(layout.val)
    return cells


def _fmt(v) -> str:
    return "inf" if v == INF else str(int(v))


def dump(layout: SlimSell) -> str:
    """Text rendering: one block per chunk, one line per lane (matrix row).

    Padding shows as ``-1`` in the col grid; Sell-C-sigma layouts add a val
    grid below it.
    """
    kind = "Sell-C-sigma" if isinstance(layout, SellCSigma) else "SlimSell"
    lines = [
        f"{kind} n={layout.n} C={layout.C} sigma={layout.sigma} "
        f"n_chunks={layout.n_chunks} P={layout.padding} cells={storage_cells(layout)}",
        "cs: " + " ".join(str(int(v)) for v in layout.cs),
        "cl: " + " ".join(str(int(v)) for v in layout.cl),
        "perm: " + " ".join(str(int(v)) for v in layout.perm),
    ]
    if isinstance(layout, SellCSigma):
        lines.append(f"semiring: {layout.semiring.name}")
    width = max([len(_fmt(v)) for v in layout.col] + [2])
    if isinstance(layout, SellCSigma):
        width = max([width] + [len(_fmt(v)) for v in layout.val])
    for i in range(layout.n_chunks):
        C, L, base = layout.C, int(layout.cl[i]), int(layout.cs[i])
        lines.append(f"chunk {i} rows {i * C}..{i * C + C - 1} cl={L}")
        grids = [("col", layout.col)]
        if isinstance(layout, SellCSigma):
            grids.append(("val", layout.val))
        for name, arr in grids:
            lines.append(f"  {name}:")
            for j in range(C):
                cells = " ".join(_fmt(arr[base + k * C + j]).rjust(width) for k in range(L))
                lines.append(f"    {cells}".rstrip())
    return "\n".join(lines) + "\n"


def sigma_for(name_or_value, n: int, C: int) -> int:
    """Resolve ``"n"``, ``"sqrt_n"``, ``"C"`` or an integer to a sort scope."""
    if isinstance(name_or_value, str):
        key = name_or_value.strip()
        if key == "n":
            return max(1, -(-n // C) * C)
        if key == "sqrt_n":
            root = math.isqrt(n - 1) + 1 if n > 0 else 0
            return max(C, -(-root // C) * C)
        if key == "C":
            return C
        name_or_value = int(key)
    if int(name_or_value) <= 0:
        raise LayoutParameterError(f"sigma must be positive, got {name_or_value}")
    return int(name_or_value)
