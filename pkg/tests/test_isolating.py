from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ghcut import stats
from ghcut.graph import GraphError, cut_value, random_graph
from ghcut.isolating import isolating_cuts
from ghcut.maxflow import max_flow

from conftest import graphs, path, star


def brute_isolating(g, Ui, rest):
    """(value, vertex-minimal side) of the (Ui, rest)-mincut by enumeration."""
    best = None
    for bits in range(1 << g.n):
        S = {v for v in range(g.n) if bits >> v & 1}
        if not Ui <= S or S & rest:
            continue
        key = (cut_value(g, S), len(S))
        if best is None or key < best[0]:
            best = (key, frozenset(S))
    return best[0][0], best[1]


def test_star_leaves():
    cuts = isolating_cuts(star(4), [{1}, {2}, {3}, {4}])
    assert [(c.side, c.value) for c in cuts] == [({i}, 1) for i in range(1, 5)]


def test_path_endpoints_pick_minimal_sides():
    cuts = isolating_cuts(path(4), [{0}, {3}])
    assert [(c.side, c.value) for c in cuts] == [({0}, 1), ({3}, 1)]


def test_two_singletons_match_max_flow():
    g = random_graph(12, 30, seed=4)
    a, b = isolating_cuts(g, [{2}, {9}])
    r = max_flow(g, 2, 9)
    assert a.side == r.min_source_side.side and a.value == r.value


@pytest.mark.parametrize("sets", [[{0}], [{0}, set()], [{0, 1}, {1, 2}], [{0}, {7}]])
def test_rejects_bad_sets(sets):
    with pytest.raises(GraphError):
        isolating_cuts(path(4), sets)


@st.composite
def instances(draw):
    g = draw(graphs(min_n=3, max_n=9))
    h = draw(st.integers(2, min(5, g.n)))
    verts = draw(st.permutations(range(g.n)))
    sets = [{v} for v in verts[:h]]
    for v in verts[h:]:
        j = draw(st.integers(-1, h - 1))
        if j >= 0:
            sets[j].add(v)
    return g, sets


@given(instances())
def test_optimal_minimal_and_disjoint(inst):
    g, sets = inst
    cuts = isolating_cuts(g, sets)
    union = set().union(*sets)
    for Ui, cut in zip(sets, cuts):
        value, side = brute_isolating(g, Ui, union - Ui)
        assert cut.value == value
        assert cut.side == side
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            assert not cuts[i].side & cuts[j].side


@pytest.mark.parametrize("h", [2, 5, 16, 40])
def test_flow_edges_are_m_log_h(h):
    g = random_graph(80, 400, seed=h)
    with stats.track() as st_:
        isolating_cuts(g, [{v} for v in range(h)])
    # each phase flow sees at most m edges; region flows touch disjoint regions,
    # so every edge is counted by at most two of them
    assert st_.flow_edges <= g.m * (math.ceil(math.log2(h)) + 2)
    assert st_.events["isolating_phase_flows"] == math.ceil(math.log2(h))
