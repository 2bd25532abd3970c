"""Canonical undirected graph type with CSR / adjacency-list views."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np


class EmptyGraphError(ValueError):
    """Raised for statistics that are undefined on a graph with no vertices."""


@dataclass(frozen=True)
class CsrView:
    """Symmetric CSR storage of an unweighted graph (the value array is implicit)."""

    row: np.ndarray
    col: np.ndarray

    @property
    def n(self) -> int:
        return len(self.row) - 1

    def neighbors(self, v: int) -> np.ndarray:
        return self.col[self.row[v]:self.row[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.row)

    @cached_property
    def src(self) -> np.ndarray:
        """Row index of every entry of ``col``."""
        return np.repeat(np.arange(self.n), self.degrees())

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """``u * n + v`` for every stored entry; sorted because rows and columns are."""
        return self.src * self.n + self.col

    @property
    def cells(self) -> int:
        """col + row, i.e. 2m + n + 1 words."""
        return len(self.col) + len(self.row)


@dataclass(frozen=True)
class AlView:
    """Adjacency list: one offset per vertex plus the concatenated neighbor IDs."""

    offsets: np.ndarray
    neighbors: np.ndarray

    @property
    def cells(self) -> int:
        return len(self.offsets) + len(self.neighbors)


@dataclass(frozen=True)
class DegreeStats:
    avg_degree: Fraction
    max_degree: int
    histogram: np.ndarray  # histogram[k] = number of vertices of degree k


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected, unweighted simple graph on vertices ``0..n-1``.

    Build instances with :meth:`from_pairs`, which drops self-loops, merges
    duplicates and symmetrizes. ``edges`` holds each undirected edge once as a
    row ``(u, v)`` with ``u < v``, sorted lexicographically.
    """

    n: int
    edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = self.edges
        if e.ndim != 2 or e.shape[1] != 2:
            raise ValueError("edges must have shape (m, 2)")
        if len(e) and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range [0, n)")
        e.setflags(write=False)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Graph":
        """Normalize an arbitrary (possibly directed, duplicated) pair list."""
        if n < 0:
            raise ValueError("n must be non-negative")
        p = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if len(p) and (p.min() < 0 or p.max() >= n):
            raise ValueError(f"vertex ID out of range [0, {n})")
        p = p[p[:, 0] != p[:, 1]]
        p = np.sort(p, axis=1)
        if len(p):
            p = np.unique(p, axis=0)
        return cls(int(n), np.ascontiguousarray(p))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def directed_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Both orientations of every edge as ``(src, dst)`` arrays of length 2m."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        return np.concatenate([u, v]), np.concatenate([v, u])

    @cached_property
    def csr(self) -> CsrView:
        src, dst = self.directed_pairs()
        order = np.lexsort((dst, src))
        col = dst[order]
        row = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=row[1:])
        row.setflags(write=False)
        col.setflags(write=False)
        return CsrView(row, col)

    def to_csr(self) -> CsrView:
        return self.csr

    def to_al(self) -> AlView:
        csr = self.csr
        return AlView(csr.row[:-1], csr.col)

    def degrees(self) -> np.ndarray:
        return self.csr.degrees()

    def degree_stats(self) -> DegreeStats:
        return degree_stats(self)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))


def to_csr(g: Graph) -> CsrView:
    return g.csr


def degree_stats(g: Graph) -> DegreeStats:
    if g.n == 0:
        raise EmptyGraphError("average degree undefined for n = 0")
    deg = g.degrees()
    return DegreeStats(
        avg_degree=Fraction(2 * g.m, g.n),
        max_degree=int(deg.max()),
        histogram=np.bincount(deg),
    )


def graph_from_csr(row, col) -> Graph:
    """Rebuild a Graph from (possibly asymmetric) CSR arrays."""
    row = np.asarray(row)
    src = np.repeat(np.arange(len(row) - 1), np.diff(row))
    return Graph.from_pairs(len(row) - 1, np.column_stack([src, np.asarray(col)]))
