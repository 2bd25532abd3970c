"""Deterministic synthetic graphs: Erdos-Renyi, Graph500-style Kronecker, fixtures.

Every random generator draws from ``numpy.random.Philox`` keyed by the seed,
so a (spec, seed) pair identifies one graph bit-exactly across platforms and
numpy versions that keep Philox's stream stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

GRAPH500_INITIATOR = (0.57, 0.19, 0.19, 0.05)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & ((1 << 64) - 1)))


def _pair_from_linear(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map linear index ``k`` of the strict lower triangle to ``(v, w)``, ``w < v``."""
    v = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) // 2).astype(np.int64)
    # float rounding can be off by one either way for large k
    v -= (v * (v - 1) // 2) > k
    v += ((v + 1) * v // 2) <= k
    w = k - v * (v - 1) // 2
    return v, w


def gen_erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p) by geometric skipping over the n(n-1)/2 candidate pairs.

    Gaps between successive chosen pairs are Geometric(p), so the expected
    cost is O(n + m) instead of O(n^2).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.from_pairs(n, np.zeros((0, 2), dtype=np.int64))
    if p == 1.0:
        k = np.arange(total, dtype=np.int64)
    else:
        rng = make_rng(seed)
        batch = max(1024, int(1.1 * p * total) + 64)
        picks = []
        pos = -1
        while pos < total:
            gaps = rng.geometric(p, size=batch)
            run = pos + np.cumsum(gaps)
            picks.append(run[run < total])
            pos = int(run[-1])
        k = np.concatenate(picks)
    v, w = _pair_from_linear(k)
    return Graph.from_pairs(n, np.column_stack([w, v]))


def gen_kronecker(scale: int, edgefactor: int = 16, seed: int = 0,
                  initiator=GRAPH500_INITIATOR) -> Graph:
    """Graph500-style R-MAT sampling of ``edgefactor * 2**scale`` candidate edges.

    Each edge picks one quadrant per bit level with the initiator
    probabilities ``(a, b, c, d)``. Self-loops and duplicates are dropped and
    the result is symmetrized; vertex IDs are not shuffled.
    """
    if scale < 1 or edgefactor < 1:
        raise ValueError("scale and edgefactor must be >= 1")
    a, b, c, d = (float(x) for x in initiator)
    if min(a, b, c, d) < 0 or not math.isclose(a + b + c + d, 1.0, abs_tol=1e-9):
        raise ValueError("initiator probabilities must be non-negative and sum to 1")
    n = 1 << scale
    m = edgefactor * n
    rng = make_rng(seed)
    ab = a + b
    c_norm = c / (c + d) if c + d > 0 else 0.0
    a_norm = a / ab if ab > 0 else 0.0
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    for bit in range(scale):
        ii = rng.random(m) > ab
        jj = rng.random(m) > np.where(ii, c_norm, a_norm)
        src |= ii.astype(np.int64) << bit
        dst |= jj.astype(np.int64) << bit
    return Graph.from_pairs(n, np.column_stack([src, dst]))


def gen_fixture(kind: str, n: int) -> Graph:
    """``path`` (0-1-...-n-1), ``clique`` or ``star`` (center 0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ids = np.arange(n)
    if kind == "path":
        pairs = np.column_stack([ids[:-1], ids[1:]])
    elif kind == "clique":
        u, v = np.triu_indices(n, 1)
        pairs = np.column_stack([u, v])
    elif kind == "star":
        pairs = np.column_stack([np.zeros(n - 1, dtype=np.int64), ids[1:]])
    else:
        raise ValueError(f"unknown fixture {kind!r}")
    return Graph.from_pairs(n, pairs)


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def build(self) -> Graph:
        p = self.params
        if self.kind == "er":
            n = int(p["n"])
            prob = float(p["p"]) if "p" in p else float(p["d"]) / n
            return gen_erdos_renyi(n, prob, self.seed)
        if self.kind == "kron":
            init = tuple(float(p.get(k, v)) for k, v in zip("abcd", GRAPH500_INITIATOR))
            if any(k in p for k in "abc") and "d" not in p:
                init = init[:3] + (1.0 - sum(init[:3]),)
            return gen_kronecker(int(p["scale"]), int(p.get("ef", 16)), self.seed, init)
        if self.kind in ("path", "clique", "star"):
            return gen_fixture(self.kind, int(p["n"]))
        raise ValueError(f"unknown generator {self.kind!r}")

    def label(self) -> str:
        parts = [f"{k}={v}" for k, v in self.params.items()]
        if self.kind in ("er", "kron"):
            parts.append(f"seed={self.seed}")
        return f"{self.kind}:" + ",".join(parts)


def parse_spec(text: str) -> GenSpec:
    """Parse ``"er:n=4096,p=0.004,seed=1"``, ``"kron:scale=14,ef=16"``, ``"path:n=64"``.

    ER also accepts ``d=<average degree>`` in place of ``p``.
    """
    kind, _, rest = text.strip().partition(":")
    if not rest:
        raise ValueError(f"generator spec {text!r} has no parameters")
    params = {}
    for item in rest.split(","):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad generator parameter {item!r}")
        params[key.strip()] = val.strip()
    seed = int(params.pop("seed", 0))
    spec = GenSpec(kind, params, seed)
    required = {"er": ("n",), "kron": ("scale",), "path": ("n",), "clique": ("n",), "star": ("n",)}
    if kind not in required:
        raise ValueError(f"unknown generator {kind!r}")
    missing = [k for k in required[kind] if k not in params]
    if kind == "er" and not ("p" in params or "d" in params):
        missing.append("p")
    if missing:
        raise ValueError(f"generator {kind!r} missing {', '.join(missing)}")
    return spec
