import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slimsell import semiring as sr
from slimsell.bfs import (BfsOptions, ConvergenceError, bfs_spmv, bfs_step, bfs_traditional, eccentricity,
                          plan_subchunks, validate_parents)
from slimsell.generators import gen_erdos_renyi, gen_fixture, gen_kronecker
from slimsell.graph import Graph
from slimsell.layout import build_slimsell, combine_partials, sell_from_slimsell, spmv_step, unit_plan
from slimsell.semiring import INF, UNREACHED, VARIANTS

from test_graph import graphs

PATH = gen_fixture("path", 4)


def nx_distances(g, root):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges.tolist())
    d = np.full(g.n, INF, dtype=np.int64)
    for v, k in nx.single_source_shortest_path_length(G, root).items():
        d[v] = k
    return d


# --- worked examples ---------------------------------------------------------

@pytest.mark.parametrize("C,sigma", [(1, 1), (2, 1), (2, 4), (4, 4), (8, 1)])
@pytest.mark.parametrize("variant", VARIANTS)
def test_path(C, sigma, variant):
    res = bfs_spmv(build_slimsell(PATH, C, sigma), 0, BfsOptions(variant))
    assert res.d.tolist() == [0, 1, 2, 3]
    assert res.p.tolist() == [0, 0, 1, 2]
    assert res.iterations == 4
    assert len(res.per_iter) == 4


@pytest.mark.parametrize("variant", VARIANTS)
def test_disconnected(variant):
    g = Graph.from_pairs(4, [(0, 1), (2, 3)])
    res = bfs_spmv(build_slimsell(g, 2, 1), 0, BfsOptions(variant, slimwork=True))
    assert res.d.tolist() == [0, 1, INF, INF]
    assert res.p[2] == res.p[3] == UNREACHED


def test_slimwork_skips_on_clique():
    g = gen_fixture("clique", 4)
    res = bfs_spmv(build_slimsell(g, 2, 1), 0, BfsOptions("tropical", slimwork=True))
    assert res.per_iter[1].chunks_skipped > 0


def test_plan_subchunks_examples():
    # with C=1 a star's center row is one chunk of cl = number of leaves
    assert plan_subchunks(build_slimsell(gen_fixture("star", 11), 1, 1), 4).segments(0) == [(0, 4), (4, 4), (8, 2)]
    assert plan_subchunks(build_slimsell(gen_fixture("star", 4), 1, 1), 8).segments(0) == [(0, 3)]
    assert plan_subchunks(build_slimsell(Graph.from_pairs(1, []), 1, 1), 2).segments(0) == []
    with pytest.raises(ValueError):
        plan_subchunks(build_slimsell(PATH, 1, 1), 0)


@given(st.integers(1, 12), st.sampled_from([1, 2, 4]))
def test_subchunk_cover(L, C):
    lay = build_slimsell(gen_kronecker(5, 4, 1), C, 1)
    p = plan_subchunks(lay, L)
    for i, cli in enumerate(lay.cl):
        pos = 0
        for a, ln in p.segments(i):
            assert a == pos and 0 < ln <= L
            pos += ln
        assert pos == cli


def test_combine_partials_examples():
    assert combine_partials("tropical", [[0, INF], [INF, 1]]).tolist() == [0, 1]
    assert combine_partials("boolean", [[1, 0], [0, 0]]).tolist() == [1, 0]
    assert combine_partials("real", [[3, 4]]).tolist() == [3, 4]


def test_traditional_examples():
    r = bfs_traditional(PATH, 0)
    assert r.d.tolist() == [0, 1, 2, 3] and r.p.tolist() == [0, 0, 1, 2]
    star = bfs_traditional(gen_fixture("star", 6), 0)
    assert star.d.tolist() == [0, 1, 1, 1, 1, 1]
    assert bfs_traditional(gen_fixture("clique", 4), 2).d.tolist() == [1, 1, 0, 1]


# --- properties --------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(graphs(max_n=40), st.data())
def test_matches_networkx(g, data):
    if g.n == 0:
        return
    root = data.draw(st.integers(0, g.n - 1))
    C = data.draw(st.sampled_from([1, 2, 4, 8]))
    sigma = data.draw(st.sampled_from([1, C, 4 * C, g.n]))
    variant = data.draw(st.sampled_from(VARIANTS))
    sw = data.draw(st.booleans())
    L = data.draw(st.sampled_from([None, 1, 4]))
    expected = nx_distances(g, root)
    assert np.array_equal(bfs_traditional(g, root).d, expected)
    res = bfs_spmv(build_slimsell(g, C, sigma), root, BfsOptions(variant, sw, L))
    assert np.array_equal(res.d, expected)
    assert validate_parents(g, res.d, res.p) is None


@pytest.mark.parametrize("seed", range(6))
def test_cross_semiring_agreement(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 65))
    g = gen_erdos_renyi(n, float(rng.choice([1.0 / n, 3.0 / n])), seed)
    lay = build_slimsell(g, 4, 8)
    for root in range(n):
        ds = [bfs_spmv(lay, root, BfsOptions(v)).d for v in VARIANTS]
        assert all(np.array_equal(ds[0], d) for d in ds[1:])


@pytest.mark.parametrize("seed", range(4))
def test_iterations_equal_levels(seed):
    g = gen_kronecker(6, 4, seed)
    lay = build_slimsell(g, 4, g.n)
    for root in (0, 7, 33):
        ref = bfs_traditional(g, root)
        ecc = eccentricity(g, root)
        assert ref.iterations == ecc + 1
        for v in VARIANTS:
            assert bfs_spmv(lay, root, BfsOptions(v)).iterations == ecc + 1


def test_selmax_prefers_largest_frontier_neighbor():
    # 0 connects to 1 and 2, both connect to 3: sel-max takes 2, dp_transform takes 1
    g = Graph.from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    lay = build_slimsell(g, 2, 1)
    assert bfs_spmv(lay, 0, BfsOptions("selmax")).p[3] == 2
    assert bfs_spmv(lay, 0, BfsOptions("tropical")).p[3] == 1


@pytest.mark.parametrize("variant", VARIANTS)
def test_slimwork_transparent_and_cheaper(variant):
    g = gen_kronecker(8, 8, 3)
    lay = build_slimsell(g, 8, g.n)
    root = int(np.argmax(g.degrees()))
    off = bfs_spmv(lay, root, BfsOptions(variant, slimwork=False))
    on = bfs_spmv(lay, root, BfsOptions(variant, slimwork=True))
    assert np.array_equal(off.d, on.d) and np.array_equal(off.p, on.p)
    assert sum(s.columns_processed for s in on.per_iter) <= sum(s.columns_processed for s in off.per_iter)
    assert sum(s.chunks_skipped for s in on.per_iter) > 0


@pytest.mark.parametrize("variant", VARIANTS)
def test_skip_soundness(variant):
    """Chunks skipped by SlimWork would have produced the same rows anyway."""
    g = gen_erdos_renyi(90, 0.05, 4)
    lay = build_slimsell(g, 4, 16)
    opts = BfsOptions(variant, slimwork=True)
    state = sr.init_state(variant, g.n, int(lay.inv_perm[0]), lay.n_padded)
    for k in range(1, g.n + 2):
        skip = sr.skip_mask(variant, state, lay.C, lay.n)
        new, _ = bfs_step(lay, state, k, opts)
        full, _ = bfs_step(lay, state, k, opts, skip=np.zeros(lay.n_chunks, dtype=bool))
        rows = np.repeat(skip, lay.C)
        for name in ("f", "d", "g", "p"):
            assert np.array_equal(getattr(new, name), getattr(full, name))
        if variant in ("tropical", "selmax"):
            # real/boolean products on finished rows are filtered away, so only these carry x
            assert np.array_equal(new.x[rows], full.x[rows])
        if sr.is_converged(variant, state, new):
            break
        state = new


@pytest.mark.parametrize("variant", ["real", "boolean"])
def test_filter_matches_unvisited(variant):
    g = gen_erdos_renyi(60, 0.06, 8)
    lay = build_slimsell(g, 4, 1)
    state = sr.init_state(variant, g.n, 0, lay.n_padded)
    for k in range(1, 20):
        state, _ = bfs_step(lay, state, k, BfsOptions(variant))
        assert np.array_equal(state.g[:g.n] == 1, state.d[:g.n] == INF)


def test_selmax_index_encoding():
    g = gen_erdos_renyi(60, 0.06, 8)
    lay = build_slimsell(g, 4, 1)
    state = sr.init_state("selmax", g.n, 0, lay.n_padded)
    for k in range(1, 8):
        state, _ = bfs_step(lay, state, k, BfsOptions("selmax"))
        nz = np.flatnonzero(state.x)
        assert np.array_equal(state.x[nz], nz + 1)


@pytest.mark.parametrize("L", [1, 4, 16])
def test_slimchunk_transparent(L):
    g = gen_kronecker(8, 8, 5)
    lay = build_slimsell(g, 8, g.n)
    for v in VARIANTS:
        ref = bfs_spmv(lay, 3, BfsOptions(v))
        got = bfs_spmv(lay, 3, BfsOptions(v, slimchunk=L))
        assert np.array_equal(ref.d, got.d) and np.array_equal(ref.p, got.p)
        assert all(s.max_unit_cells <= L * lay.C for s in got.per_iter)
        assert all(s.subchunks_processed > 0 for s in got.per_iter)


@pytest.mark.parametrize("schedule", ["static", "dynamic"])
@pytest.mark.parametrize("L", [None, 2])
def test_workers_deterministic(schedule, L):
    g = gen_kronecker(7, 8, 9)
    lay = build_slimsell(g, 4, 16)
    base = bfs_spmv(lay, 1, BfsOptions("boolean", True, L, schedule, 1))
    for w in (2, 4, 8):
        got = bfs_spmv(lay, 1, BfsOptions("boolean", True, L, schedule, w))
        assert np.array_equal(base.d, got.d) and np.array_equal(base.p, got.p)
        assert [s.counters() for s in base.per_iter] == [s.counters() for s in got.per_iter]


@pytest.mark.parametrize("variant", VARIANTS)
def test_sell_layout_runs_same(variant):
    g = gen_erdos_renyi(70, 0.05, 1)
    slim = build_slimsell(g, 4, 8)
    sell = sell_from_slimsell(slim, variant)
    a = bfs_spmv(slim, 5, BfsOptions(variant, True, 2))
    b = bfs_spmv(sell, 5, BfsOptions(variant, True, 2))
    assert np.array_equal(a.d, b.d) and np.array_equal(a.p, b.p)
    with pytest.raises(ValueError):
        bfs_spmv(sell, 5, BfsOptions("tropical" if variant != "tropical" else "real"))


def test_iteration_cap():
    with pytest.raises(ConvergenceError) as exc:
        bfs_spmv(build_slimsell(PATH, 2, 1), 0, BfsOptions("tropical", max_iterations=2))
    assert len(exc.value.per_iter) == 2
    assert exc.value.state.k == 2


def test_options_validation():
    with pytest.raises(ValueError):
        BfsOptions(slimchunk=0)
    with pytest.raises(ValueError):
        BfsOptions(schedule="guided")
    with pytest.raises(ValueError):
        BfsOptions(workers=0)
    with pytest.raises(ValueError):
        bfs_spmv(build_slimsell(PATH, 2, 1), 4)


def test_validate_parents_catches_errors():
    d = np.array([0, 1, 2, 3])
    assert validate_parents(PATH, d, np.array([0, 0, 1, 2])) is None
    assert validate_parents(PATH, d, np.array([0, 0, 0, 2])) is not None
    assert validate_parents(PATH, d, np.array([1, 0, 1, 2])) is not None
    g = Graph.from_pairs(4, [(0, 1), (0, 2), (1, 3)])
    assert "neighbor" in validate_parents(g, np.array([0, 1, 1, 2]), np.array([0, 0, 0, 2]))


def test_unit_plan_cached():
    lay = build_slimsell(PATH, 2, 1)
    assert unit_plan(lay, 3) is unit_plan(lay, 3)
    assert unit_plan(lay, None) is not unit_plan(lay, 3)


def test_spmv_step_matches_engine_first_iteration():
    g = gen_erdos_renyi(50, 0.1, 3)
    lay = build_slimsell(g, 4, 8)
    state = sr.init_state("tropical", g.n, 0, lay.n_padded)
    new, _ = bfs_step(lay, state, 1, BfsOptions("tropical"))
    assert np.array_equal(new.x, spmv_step(lay, "tropical", state.x))
