"""Embedded correctness suite run by ``slimsell selftest``."""
from __future__ import annotations

import sys

import numpy as np

from .analysis import check_padding_bound, storage_report
from .bfs import BfsOptions, ConvergenceError, bfs_spmv, bfs_traditional, validate_parents
from .generators import gen_erdos_renyi, gen_kronecker, make_rng
from .layout import build_slimsell, sell_from_slimsell
from .semiring import VARIANTS, InconsistentDistancesError, get_semiring, with_pad_value


def _graphs(seed=7):
    rng = make_rng(seed)
    out = []
    for i in range(6):
        n = int(rng.integers(8, 80))
        out.append(gen_erdos_renyi(n, float(rng.choice([2.0 / n, 6.0 / n, 0.3])), seed + i))
    out.append(gen_kronecker(5, 4, seed))
    out.append(gen_kronecker(6, 8, seed + 1))
    return out


def check_oracle(fault: str | None = None) -> str | None:
    rng = make_rng(11)
    for g in _graphs():
        roots = rng.choice(g.n, size=min(3, g.n), replace=False)
        for C in (2, 4, 8):
            for sigma in (1, C, g.n):
                slim = build_slimsell(g, C, sigma)
                for name in VARIANTS:
                    s = get_semiring(name)
                    pad = s.one if fault == "pad" else s.pad_value
                    layouts = [("slimsell", slim), ("sell", sell_from_slimsell(slim, with_pad_value(s, pad)))]
                    for r in roots:
                        ref = bfs_traditional(g, int(r))
                        for lname, lay in layouts:
                            for sw in (False, True):
                                for sc in (None, 4):
                                    where = f"{lname} n={g.n} C={C} sigma={sigma} {name} sw={sw} L={sc} root={r}"
                                    try:
                                        res = bfs_spmv(lay, int(r), BfsOptions(name, sw, sc))
                                    except (InconsistentDistancesError, ConvergenceError) as exc:
                                        return f"engine error ({exc}): {where}"
                                    if not np.array_equal(res.d, ref.d):
                                        return f"distance mismatch: {where}"
                                    err = validate_parents(g, res.d, res.p)
                                    if err:
                                        return f"invalid parents ({err}): {where}"
    return None


def check_padding(count=200) -> str | None:
    rng = make_rng(3)
    for i in range(count):
        n = int(rng.integers(1, 120))
        g = gen_erdos_renyi(n, float(rng.random()) * 0.2, 1000 + i)
        C = int(rng.choice([1, 2, 4, 8, 16]))
        b = check_padding_bound(g, C)
        if not b.holds:
            return f"n={n} C={C}: {b.measured_cells} > {b.bound}"
    return None


def check_storage(count=200) -> str | None:
    rng = make_rng(5)
    for i in range(count):
        n = int(rng.integers(1, 120))
        g = gen_erdos_renyi(n, float(rng.random()) * 0.2, 2000 + i)
        C = int(rng.choice([1, 2, 4, 8, 16]))
        sigma = int(rng.integers(1, n + 1))
        rep = storage_report(g, C, sigma)
        for e in rep.entries:
            if not e.exact:
                return f"{e.name} n={n} C={C} sigma={sigma}: measured {e.measured} != {e.predicted}"
    return None


def check_workers() -> str | None:
    g = gen_kronecker(8, 8, 21)
    slim = build_slimsell(g, 8, g.n)
    root = int(np.argmax(g.degrees()))
    for sched in ("static", "dynamic"):
        for sc in (None, 4):
            ref = bfs_spmv(slim, root, BfsOptions("tropical", True, sc, sched, 1))
            got = bfs_spmv(slim, root, BfsOptions("tropical", True, sc, sched, 8))
            if [s.counters() for s in ref.per_iter] != [s.counters() for s in got.per_iter]:
                return f"counters differ between 1 and 8 workers ({sched}, L={sc})"
            if not (np.array_equal(ref.d, got.d) and np.array_equal(ref.p, got.p)):
                return f"results differ between 1 and 8 workers ({sched}, L={sc})"
    return None


CHECKS = [
    ("oracle-equivalence", check_oracle),
    ("padding-bound", check_padding),
    ("storage-exactness", check_storage),
    ("worker-determinism", check_workers),
]


def selftest(fault: str | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    failed = 0
    for name, fn in CHECKS:
        err = fn(fault) if fn is check_oracle else fn()
        stream.write(f"{'ok  ' if err is None else 'FAIL'} {name}{'' if err is None else ': ' + err}\n")
        failed += err is not None
    return 0 if not failed else 2
