"""The four BFS semirings and their per-iteration frontier bookkeeping.

All vectors are ``int64``. Infinity is the saturating sentinel :data:`INF`;
vertex indices inside the sel-max variant are 1-based so that 0 means "unset".
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .graph import Graph

INF = np.iinfo(np.int64).max
UNREACHED = -1

TROPICAL = "tropical"
REAL = "real"
BOOLEAN = "boolean"
SELMAX = "selmax"
VARIANTS = (TROPICAL, REAL, BOOLEAN, SELMAX)


def saturating_add(a, b):
    """``a + b`` on non-negative int64 with ``INF`` absorbing; never overflows."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return a + np.minimum(b, INF - a)


@dataclass(frozen=True)
class Semiring:
    """Scalar algebra plus the substitution values used by the chunked kernel.

    ``plus`` must be a numpy ufunc so that it supports ``reduce`` and ``at``.
    ``edge_value`` stands in for a structural nonzero and ``pad_value`` for a
    padding cell; the latter is the additive identity so padding never moves
    an accumulator.
    """

    name: str
    plus: np.ufunc
    times: Callable[[np.ndarray, np.ndarray], np.ndarray]
    zero: int
    one: int
    edge_value: int
    pad_value: int

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw scalars from the carrier set used by BFS (for axiom checks)."""
        if self.name == BOOLEAN:
            return rng.integers(0, 2, size)
        if self.name == TROPICAL:
            vals = rng.integers(0, 1 << 40, size)
            vals[rng.random(size) < 0.2] = INF
            small = rng.random(size) < 0.3
            vals[small] = rng.integers(0, 8, int(small.sum()))
            return vals
        # real/selmax: bounded so products of three samples stay exact in int64
        return rng.integers(0, 1 << 20, size)


TROPICAL_SEMIRING = Semiring(TROPICAL, np.minimum, saturating_add, INF, 0, 1, INF)
REAL_SEMIRING = Semiring(REAL, np.add, np.multiply, 0, 1, 1, 0)
BOOLEAN_SEMIRING = Semiring(BOOLEAN, np.bitwise_or, np.bitwise_and, 0, 1, 1, 0)
# the usual carrier has -inf as identity; on the non-negative index domain 0 serves
SELMAX_SEMIRING = Semiring(SELMAX, np.maximum, np.multiply, 0, 1, 1, 0)

SEMIRINGS = {s.name: s for s in (TROPICAL_SEMIRING, REAL_SEMIRING, BOOLEAN_SEMIRING, SELMAX_SEMIRING)}


def get_semiring(name) -> Semiring:
    if isinstance(name, Semiring):
        return name
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise ValueError(f"unknown semiring {name!r}; choose from {', '.join(VARIANTS)}") from None


def with_pad_value(s: Semiring, pad_value: int) -> Semiring:
    """Copy of ``s`` with a different padding substitute (fault injection)."""
    return replace(s, pad_value=pad_value)


@dataclass
class IterationState:
    """Vectors carried between BFS iterations, in permuted row space.

    Unused slots are ``None``: ``g`` exists only for real/boolean and ``p``
    only for sel-max.
    """

    x: np.ndarray
    f: np.ndarray
    d: np.ndarray
    g: np.ndarray | None = None
    p: np.ndarray | None = None
    k: int = 0

    def copy(self) -> "IterationState":
        return IterationState(
            self.x.copy(), self.f.copy(), self.d.copy(),
            None if self.g is None else self.g.copy(),
            None if self.p is None else self.p.copy(),
            self.k,
        )


def init_state(variant, n: int, root: int, n_padded: int | None = None) -> IterationState:
    """Initial vectors for a BFS from ``root``.

    Rows ``n..n_padded-1`` are chunk padding: they hold the additive identity
    and are never reachable.
    """
    s = get_semiring(variant)
    if not 0 <= root < n:
        raise ValueError(f"root {root} out of range [0, {n})")
    size = n if n_padded is None else n_padded
    if size < n:
        raise ValueError("n_padded < n")
    d = np.full(size, INF, dtype=np.int64)
    d[root] = 0
    onehot = np.zeros(size, dtype=np.int64)
    onehot[root] = 1
    if s.name == TROPICAL:
        x = np.full(size, INF, dtype=np.int64)
        x[root] = 0
        return IterationState(x=x, f=x.copy(), d=d)
    if s.name in (REAL, BOOLEAN):
        g = np.zeros(size, dtype=np.int64)
        g[:n] = 1
        g[root] = 0
        return IterationState(x=onehot.copy(), f=onehot, d=d, g=g)
    x = np.zeros(size, dtype=np.int64)
    x[root] = root + 1
    return IterationState(x=x, f=onehot, d=d, p=x.copy())


def spmv_operand(variant, state: IterationState) -> np.ndarray:
    """Vector multiplied by the adjacency matrix in the next iteration."""
    s = get_semiring(variant)
    if s.name in (REAL, BOOLEAN):
        return state.f
    return state.x


def post_process(variant, state: IterationState, x: np.ndarray, k: int) -> IterationState:
    """Derive frontier, distances and parents from the product ``x`` of iteration ``k``.

    Returns a new state; ``state`` is left untouched.
    """
    s = get_semiring(variant)
    x = np.asarray(x, dtype=np.int64)
    if s.name == TROPICAL:
        # x, f and d coincide; the engine never writes state vectors in place
        x = x.copy()
        return IterationState(x=x, f=x, d=x, k=k)
    d = state.d.copy()
    if s.name in (REAL, BOOLEAN):
        if s.name == REAL:
            hit = (x * state.g) != 0
        else:
            hit = (x & state.g) != 0
        f = hit.astype(np.int64)
        d[hit] = k
        g = state.g.copy()
        g[hit] = 0
        return IterationState(x=x.copy(), f=f, d=d, g=g, k=k)
    unset = state.p == 0
    hit = unset & (x != 0)
    p = state.p + unset * x
    d[hit] = k
    x_idx = (x != 0) * np.arange(1, len(x) + 1, dtype=np.int64)
    return IterationState(x=x_idx, f=hit.astype(np.int64), d=d, p=p, k=k)


def pending_rows(variant, state: IterationState, n: int) -> np.ndarray:
    """Rows whose BFS value may still change; padding rows are never pending."""
    s = get_semiring(variant)
    if s.name == TROPICAL:
        pend = state.f == INF
    elif s.name in (REAL, BOOLEAN):
        pend = state.g != 0
    else:
        pend = state.p == 0
    pend[n:] = False
    return pend


def skip_mask(variant, state: IterationState, C: int, n: int) -> np.ndarray:
    """Per-chunk SlimWork decision for all chunks at once (True = skip)."""
    pend = pending_rows(variant, state, n)
    return ~np.logical_or.reduce(pend.reshape(-1, C), axis=1)


def should_skip_chunk(variant, state: IterationState, chunk: int, C: int, n: int | None = None) -> bool:
    """SlimWork test for one chunk: skip iff none of its vertices can still change."""
    n = len(state.x) if n is None else n
    lo, hi = chunk * C, min((chunk + 1) * C, n)
    return not pending_rows(variant, state, n)[lo:hi].any()


def is_converged(variant, prev: IterationState, state: IterationState) -> bool:
    s = get_semiring(variant)
    if s.name == TROPICAL:
        return not np.count_nonzero(prev.x != state.x)
    return not np.count_nonzero(state.f)


def newly_reached(prev: IterationState, state: IterationState) -> np.ndarray:
    return (prev.d == INF) & (state.d != INF)


class InconsistentDistancesError(ValueError):
    pass


def dp_transform(g: Graph, d) -> np.ndarray:
    """Parents from distances: smallest-ID neighbor one level closer to the root.

    The root (the unique vertex at distance 0) is its own parent; unreached
    vertices get :data:`UNREACHED`. Linear in ``n + m``.
    """
    d = np.asarray(d, dtype=np.int64)
    if len(d) != g.n:
        raise ValueError(f"distance vector has length {len(d)}, graph has n={g.n}")
    roots = (d == 0).nonzero()[0]
    if len(roots) != 1:
        raise InconsistentDistancesError(f"expected exactly one vertex at distance 0, found {len(roots)}")
    csr = g.csr
    src, dst = csr.src, csr.col
    ds = d[src]
    good = ((ds != INF) & (d[dst] == ds - 1)).nonzero()[0]
    # csr is row-sorted with ascending columns, so the first hit per row is the min ID
    gs = src[good]
    first = np.ones(len(gs), dtype=bool)
    first[1:] = gs[1:] != gs[:-1]
    p = np.full(g.n, UNREACHED, dtype=np.int64)
    p[gs[first]] = dst[good[first]]
    root = int(roots[0])
    p[root] = root
    orphans = ((d != INF) & (p == UNREACHED)).nonzero()[0]
    if len(orphans):
        v = int(orphans[0])
        raise InconsistentDistancesError(f"vertex {v} at distance {d[v]} has no neighbor at distance {d[v] - 1}")
    return p
