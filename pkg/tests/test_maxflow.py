from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ghcut import maxflow
from ghcut.graph import GraphError, build_graph, cut_value
from ghcut.maxflow import flow_between_sets, max_flow, region_flow
from ghcut.verify import mincut_enumerate

from conftest import K, P3, graphs

ENGINES = ("native", "scipy", "dinic")


def brute_cuts(g, s, t):
    """(min value, list of optimal s-sides) over all s-t cuts."""
    rest = [v for v in range(g.n) if v not in (s, t)]
    best, sides = None, []
    for bits in range(1 << len(rest)):
        side = {s} | {v for i, v in enumerate(rest) if bits >> i & 1}
        val = cut_value(g, side)
        if best is None or val < best:
            best, sides = val, [side]
        elif val == best:
            sides.append(side)
    return best, sides


@pytest.mark.parametrize("engine", ENGINES)
def test_examples(engine):
    r = max_flow(P3(), 0, 2, backend=engine)
    assert r.value == 3 and r.min_source_side.side == {0}
    assert max_flow(K(4), 0, 3, backend=engine).value == 3
    empty = build_graph(2, [])
    r = max_flow(empty, 0, 1, backend=engine)
    assert r.value == 0 and r.min_source_side.side == {0}


def test_rejects_bad_terminals():
    with pytest.raises(GraphError):
        max_flow(P3(), 1, 1)
    with pytest.raises(GraphError):
        max_flow(P3(), 0, 3)


def test_scipy_engine_refuses_huge_weights():
    g = build_graph(3, [(0, 1, 2**30), (1, 2, 2**30), (0, 2, 2**30)])
    with pytest.raises(GraphError):
        max_flow(g, 0, 2, backend="scipy")
    assert max_flow(g, 0, 2).value == 2**31


def test_backend_switch():
    old = maxflow.get_backend()
    try:
        maxflow.set_backend("dinic")
        assert maxflow.get_backend() == "dinic"
        with pytest.raises(ValueError):
            maxflow.set_backend("nope")
    finally:
        maxflow.set_backend(old)


@given(graphs(min_n=2, max_n=9), st.data())
def test_engines_agree_with_enumeration(g, data):
    s, t = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    results = [max_flow(g, s, t, backend=e) for e in ENGINES]
    lam = mincut_enumerate(g, s, t)
    for r in results:
        assert r.value == lam
        assert r.min_source_side == results[0].min_source_side
        assert r.max_source_side == results[0].max_source_side


@given(graphs(min_n=2, max_n=9), st.data())
def test_certification_and_conservation(g, data):
    s, t = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    for engine in ENGINES:
        r = max_flow(g, s, t, backend=engine)
        assert cut_value(g, r.min_source_side.side) == r.value
        assert cut_value(g, r.max_source_side.side) == r.value
        assert r.min_source_side.side <= r.max_source_side.side
        f = np.asarray(r.edge_flow, dtype=np.int64)
        assert (np.abs(f) <= g.ws).all()
        net = np.zeros(g.n, dtype=np.int64)
        np.add.at(net, g.us, f)
        np.add.at(net, g.vs, -f)
        for v in range(g.n):
            expected = r.value if v == s else -r.value if v == t else 0
            assert net[v] == expected


@given(graphs(min_n=2, max_n=9), st.data())
def test_min_side_is_minimal_and_max_side_maximal(g, data):
    s, t = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    r = max_flow(g, s, t)
    best, sides = brute_cuts(g, s, t)
    assert r.value == best
    # optimal sides are closed under union and intersection, so these are unique
    assert r.min_source_side.side == frozenset.intersection(*map(frozenset, sides))
    assert r.max_source_side.side == frozenset.union(*map(frozenset, sides))
    # dropping any non-source vertex from the minimal side strictly raises the cut
    for v in r.min_source_side.side - {s}:
        assert cut_value(g, r.min_source_side.side - {v}) > r.value


@given(graphs(min_n=2, max_n=10), st.data())
def test_symmetry(g, data):
    s, t = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    assert max_flow(g, s, t).value == max_flow(g, t, s).value


@given(graphs(min_n=3, max_n=9), st.data())
def test_set_flows_agree_across_engines(g, data):
    verts = data.draw(st.permutations(range(g.n)))
    a = data.draw(st.integers(1, g.n - 2))
    b = data.draw(st.integers(a + 1, g.n - 1))
    S, T = verts[:a], verts[a:b]
    cuts = [flow_between_sets(g, S, T, backend=e) for e in ENGINES]
    assert len({(c.side, c.value) for c in cuts}) == 1
    region = np.array(sorted(set(range(g.n)) - set(T)))
    regs = [region_flow(g, S, region, backend=e) for e in ENGINES]
    assert len({(c.side, c.value) for c in regs}) == 1
    assert regs[0] == cuts[0]


def test_set_flow_rejects_overlap():
    with pytest.raises(GraphError):
        flow_between_sets(P3(), {0, 1}, {1})
    with pytest.raises(GraphError):
        flow_between_sets(P3(), set(), {1})
