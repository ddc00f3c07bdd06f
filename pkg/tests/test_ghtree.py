from __future__ import annotations

import itertools
import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ghcut import stats
from ghcut.graph import GraphError, build_graph, contract, random_graph
from ghcut.ghtree import (GhTree, format_tree, ghtree_fast, ghtree_step, gomory_hu_classic,
                          gusfield, parse_tree, tree_from_json, tree_matrix, tree_query,
                          tree_to_json)
from ghcut.maxflow import max_flow
from ghcut.ssmc import PIPELINE_CONFIG, SsmcConfig
from ghcut.verify import apmf_bruteforce, validate_ghtree

from conftest import K, P3, graphs, path, star

CONSTRUCTORS = [gomory_hu_classic, gusfield, ghtree_fast]
# tiny base case so the recursive constructor actually recurses on small graphs
DEEP = SsmcConfig(base_case_size=3, sampling_trials_factor=1.0, guide_trials_factor=1.0)


@pytest.mark.parametrize("build", CONSTRUCTORS)
def test_constructor_examples(build):
    assert build(P3()).edges == ((0, 1, 3), (1, 2, 5))
    t = build(K(4))
    assert sorted(w for _, _, w in t.edges) == [3, 3, 3]
    assert validate_ghtree(K(4), t) is None
    one = build(build_graph(1, []))
    assert one.edges == () and one.terminals == frozenset({0})


def test_k4_classic_is_a_star():
    t = gomory_hu_classic(K(4))
    deg = np.bincount([x for a, b, _ in t.edges for x in (a, b)], minlength=4)
    assert sorted(deg.tolist()) == [1, 1, 1, 3]


def test_fast_examples():
    g = random_graph(12, 30, seed=1)
    t = ghtree_fast(g, [5])
    assert t.edges == () and set(t.f.values()) == {5}
    assert ghtree_fast(path(4)).edges == ((0, 1, 1), (1, 2, 1), (2, 3, 1))


def test_step_examples():
    s = ghtree_step(star(6), 0, range(7))
    assert s.D
    for v, cut in s.parts:
        assert cut.side == {v} and cut.value == 1
    edge = build_graph(2, [(0, 1, 4)])
    s = ghtree_step(edge, 0, {0, 1})
    assert s.D == {1} and [(v, c.side, c.value) for v, c in s.parts] == [(1, {1}, 4)]
    s = ghtree_step(K(4), 0, range(4))
    assert all(c.side == {v} and c.value == 3 for v, c in s.parts)
    assert s.D == {1, 2, 3}


@given(graphs(min_n=3, max_n=12, connected=True), st.data())
def test_step_parts_are_disjoint_minimal_mincuts(g, data):
    U = sorted(data.draw(st.sets(st.integers(0, g.n - 1), min_size=2, max_size=g.n)))
    s = data.draw(st.sampled_from(U))
    res = ghtree_step(g, s, U)
    covered = set()
    for v, cut in res.parts:
        assert cut.value == max_flow(g, s, v).value
        assert 2 * len(cut.side & set(U)) <= len(U)
        assert not covered & cut.side and s not in cut.side
        covered |= cut.side
    assert res.D == frozenset(u for u in U if u in covered)


def test_step_rejects_bad_input():
    with pytest.raises(GraphError):
        ghtree_step(K(3), 0, {0})
    with pytest.raises(GraphError):
        ghtree_step(K(3), 0, {1, 2})


def test_query_examples():
    t = GhTree.make(range(3), [(0, 1, 3), (1, 2, 5)], {v: v for v in range(3)})
    val, cut = tree_query(t, 0, 2)
    assert (val, cut.side) == (3, {0})
    star_t = gomory_hu_classic(K(4))
    assert all(tree_query(star_t, a, b)[0] == 3 for a, b in itertools.permutations(range(4), 2))
    g = build_graph(4, [(0, 1, 2), (2, 3, 5)])
    t = gomory_hu_classic(g)
    val, cut = tree_query(t, 0, 3)
    assert val == 0 and cut_is_component(g, cut.side)
    with pytest.raises(GraphError):
        tree_query(t, 1, 1)
    with pytest.raises(GraphError):
        tree_query(t, 0, 9)


def cut_is_component(g, side):
    comp = g.components
    return len({comp[v] for v in side}) == 1 and 0 in side


def test_query_prefers_light_edge_nearest_b():
    t = GhTree.make(range(3), [(0, 1, 2), (1, 2, 2)], {v: v for v in range(3)})
    assert tree_query(t, 0, 2)[1].side == {0, 1}
    assert tree_query(t, 2, 0)[1].side == {1, 2}


def test_classic_uses_n_minus_1_flows():
    for n in (2, 7, 20):
        g = random_graph(n, 3 * n, seed=n)
        with stats.track() as st_:
            gomory_hu_classic(g)
        assert st_.flow_calls == n - 1


@given(graphs(min_n=2, max_n=14))
def test_all_constructors_validate(g):
    mat = apmf_bruteforce(g)
    for build in CONSTRUCTORS:
        t = build(g)
        assert validate_ghtree(g, t) is None
        U, m = tree_matrix(t)
        assert U == list(range(g.n)) and (m == mat).all()


@given(graphs(min_n=2, max_n=14, connected=True), st.integers(0, 2**16))
def test_deep_recursion_validates(g, seed):
    with stats.track() as st_:
        t = ghtree_fast(g, cfg=replace(DEEP, seed=seed), validate=True)
    assert validate_ghtree(g, t) is None
    assert st_.events.get("ghtree_retries", 0) <= 3


@given(graphs(min_n=2, max_n=14, connected=True), st.data())
def test_steiner_trees_validate(g, data):
    U = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n))
    t = ghtree_fast(g, U)
    assert t.terminals == U
    assert validate_ghtree(g, t) is None


def test_contraction_keeps_terminal_connectivity():
    """Pairs inside a part, or left over outside all parts, keep their value after contraction."""
    for seed in range(6):
        g = random_graph(14, 40, (1, 9), seed)
        U = list(range(0, 14, 2)) + [1]
        res = ghtree_step(g, U[0], U)
        for v, cut in res.parts:
            inside = sorted(cut.side & set(U))
            h, cmap = contract(g, [[x for x in range(g.n) if x not in cut.side]])
            for a, b in itertools.combinations(inside, 2):
                assert max_flow(h, cmap.image[a], cmap.image[b]).value == max_flow(g, a, b).value
        h, cmap = contract(g, [c.side for _, c in res.parts])
        rest = [u for u in U if u not in res.D]
        for a, b in itertools.combinations(rest, 2):
            assert max_flow(h, cmap.image[a], cmap.image[b]).value == max_flow(g, a, b).value


def test_fast_records_depth_and_is_seeded():
    g = random_graph(40, 120, seed=2)
    with stats.track() as st_:
        a = ghtree_fast(g, cfg=replace(PIPELINE_CONFIG, seed=5))
    assert st_.maxima["ghtree_depth"] >= 1
    assert a == ghtree_fast(g, cfg=replace(PIPELINE_CONFIG, seed=5))


@given(graphs(min_n=1, max_n=10), st.data())
def test_formats_round_trip(g, data):
    U = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n))
    t = ghtree_fast(g, U)
    text = format_tree(t)
    assert parse_tree(text) == t and format_tree(parse_tree(text)) == text
    blob = json.dumps(tree_to_json(t))
    assert tree_from_json(blob) == t and json.dumps(tree_to_json(tree_from_json(blob))) == blob


@pytest.mark.parametrize("text", [
    "T 0 1 3\n",
    "t 2\nT 0 x 3\n",
    "t 2\nQ 1\n",
    "t 3\nF 0 0\nF 0 1\n",
    "t 2\nT 0 5 1\n",
])
def test_parse_tree_errors(text):
    with pytest.raises(GraphError):
        parse_tree(text)
