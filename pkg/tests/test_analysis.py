import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slimsell.analysis import (check_padding_bound, format_report_table, predicted_cells, storage_report,
                               work_bound)
from slimsell.generators import gen_erdos_renyi, gen_fixture

from test_graph import graphs

PATH = gen_fixture("path", 4)


def test_storage_path_unsorted():
    rep = storage_report(PATH, 2, 1)
    assert rep.slimsell.measured == 12
    assert rep.al.measured == 10
    assert rep.sell_c_sigma.measured == 20
    assert rep.csr.measured == 2 * 3 + 4 + 1
    assert rep.csr_with_val == 4 * 3 + 4
    assert not rep.slimsell_beats_al


def test_storage_path_sorted_tie():
    rep = storage_report(PATH, 2, 4)
    assert rep.slimsell.measured == 10 == rep.al.measured
    assert not rep.slimsell_beats_al


def test_beats_al_threshold_c8():
    # with C | n the flag is P < 3n/4 when C = 8
    g = gen_erdos_renyi(64, 0.1, 3)
    rep = storage_report(g, 8, 64)
    assert rep.slimsell_beats_al == (rep.padding < 3 * g.n / 4)
    assert rep.slimsell_beats_al == (rep.slimsell.measured < rep.al.measured)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=40), st.sampled_from([1, 2, 3, 4, 8, 16]), st.integers(1, 50))
def test_storage_exact(g, C, sigma):
    rep = storage_report(g, C, sigma)
    assert all(e.exact for e in rep.entries)
    assert rep.n_chunks == -(-g.n // C)
    assert rep.slimsell_beats_al == (rep.slimsell.measured < rep.al.measured)


def test_predicted_cells():
    p = predicted_cells(m=3, n=4, n_chunks=2, padding=2)
    assert p == {"slimsell": 12, "sell_c_sigma": 20, "al": 10, "csr": 11, "csr_with_val": 16}


def test_work_bound_examples():
    assert work_bound("general", D=3, n=4, m=3, C=2, max_degree=2).value == 33
    assert work_bound("erdos_renyi", D=1, n=math.e, m=0, C=1).value == pytest.approx(math.e + 1)
    n = 50
    assert work_bound("power_law", D=2, n=n, m=0, C=3, alpha=1, beta=2).value == pytest.approx(
        2 * n + 3 * 2 * n * math.log(n))


def test_work_bound_errors_and_monotone():
    with pytest.raises(ValueError):
        work_bound("power_law", D=1, n=10, m=1, C=1, alpha=1, beta=1)
    with pytest.raises(ValueError):
        work_bound("general", D=1, n=10, m=1, C=1)
    with pytest.raises(ValueError):
        work_bound("tree", D=1, n=10, m=1, C=1)
    base = work_bound("general", D=2, n=10, m=20, C=4, max_degree=5).value
    for k in ("D", "n", "m", "C", "max_degree"):
        kw = dict(D=2, n=10, m=20, C=4, max_degree=5)
        kw[k] += 1
        assert work_bound("general", **kw).value > base


def test_padding_bound_examples():
    b = check_padding_bound(PATH, 2)
    assert b.measured_cells == 6 and b.bound == 10 and b.holds
    star = check_padding_bound(gen_fixture("star", 6), 4)
    assert star.measured_cells <= 30 == star.bound
    c1 = check_padding_bound(gen_erdos_renyi(40, 0.2, 1), 1)
    assert c1.measured_cells == 2 * gen_erdos_renyi(40, 0.2, 1).m


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=40), st.sampled_from([1, 2, 4, 8, 16]))
def test_padding_bound_holds(g, C):
    assert check_padding_bound(g, C).holds


def test_format_table():
    text = format_report_table([{"a": 1, "bb": "x"}, {"a": 100, "bb": "yy"}], ["a", "bb"])
    lines = text.splitlines()
    assert len(lines) == 3 and len({len(l) for l in lines}) == 1
