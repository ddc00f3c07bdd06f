from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ghcut.graph import W_MAX, GraphError, build_graph, cut_value, random_graph
from ghcut.maxflow import max_flow
from ghcut.oracles import (CutThresholdOracle, SsmcApproxOracle, approx_single_source_mincuts,
                           cut_threshold, max_terminal_mincut, steiner_mincut, within_sandwich)
from ghcut.verify import apmf_bruteforce, mincut_enumerate

from conftest import K, P3, cycle, graphs, path, star


def test_cut_threshold_examples():
    o = CutThresholdOracle(P3())
    assert cut_threshold(o, 0, 3) == {1, 2}
    assert cut_threshold(o, 0, 2) == set()
    g = random_graph(10, 20, seed=1)
    assert cut_threshold(CutThresholdOracle(g), 4, g.m * W_MAX) == set(range(10)) - {4}


def test_max_terminal_mincut_examples():
    assert max_terminal_mincut(CutThresholdOracle(P3()), {0, 1}, 2) == (5, {1})
    assert max_terminal_mincut(CutThresholdOracle(star(3)), {1, 2, 3}, 0) == (1, {1, 2, 3})
    g = random_graph(9, 18, seed=2)
    assert max_terminal_mincut(CutThresholdOracle(g), {6}, 1) == (max_flow(g, 1, 6).value, {6})


def test_max_terminal_mincut_rejects_bad_input():
    o = CutThresholdOracle(P3())
    with pytest.raises(GraphError):
        max_terminal_mincut(o, set(), 0)
    with pytest.raises(GraphError):
        max_terminal_mincut(o, {0, 1}, 0)


def test_steiner_mincut_examples():
    assert steiner_mincut(K(4), range(4)) == 3
    assert steiner_mincut(path(4), {0, 3}) == 1
    c4 = cycle(4)
    brute = min(mincut_enumerate(c4, a, b) for a, b in itertools.combinations(range(4), 2))
    assert brute == 2 and steiner_mincut(c4, range(4)) == 2


def test_approx_oracle_examples():
    assert approx_single_source_mincuts(SsmcApproxOracle(P3()), 0) == {1: 3, 2: 3}
    assert approx_single_source_mincuts(SsmcApproxOracle(build_graph(2, [])), 0) == {1: 0}


def test_plugins_are_used():
    o = CutThresholdOracle(P3(), strategy="plugin", plugin=lambda g, s, lam, pool: {v for v in pool if v == 2})
    assert cut_threshold(o, 0, 100) == {2}
    a = SsmcApproxOracle(P3(), strategy="plugin", eps=0.1, plugin=lambda g, s, pool: {v: 3.2 for v in pool})
    est = approx_single_source_mincuts(a, 0)
    assert within_sandwich(est, {1: 3, 2: 3}, 0.1)
    assert not within_sandwich(est, {1: 3, 2: 3}, 0.01)
    with pytest.raises(ValueError):
        CutThresholdOracle(P3(), strategy="plugin")


@given(graphs(min_n=2, max_n=8), st.data())
def test_threshold_monotone(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    a, b = sorted(data.draw(st.lists(st.integers(0, 30), min_size=2, max_size=2)))
    o = CutThresholdOracle(g)
    assert cut_threshold(o, s, a) <= cut_threshold(o, s, b)


@given(graphs(min_n=2, max_n=30, connected=True), st.data())
def test_max_finder_matches_direct(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    U = data.draw(st.sets(st.sampled_from([v for v in range(g.n) if v != s]), min_size=1))
    lam = {t: max_flow(g, s, t).value for t in U}
    best = max(lam.values())
    assert max_terminal_mincut(CutThresholdOracle(g), U, s) == (best, {t for t in U if lam[t] == best})


@given(graphs(min_n=2, max_n=9))
def test_exact_approx_oracle_is_inside_every_sandwich(g):
    exact = {v: mincut_enumerate(g, 0, v) for v in range(1, g.n)}
    assert within_sandwich(approx_single_source_mincuts(SsmcApproxOracle(g), 0), exact, 0.0)


@given(graphs(min_n=3, max_n=8), st.data())
def test_uncrossing_against_brute_force(g, data):
    """The minimal (X, U-X)-mincut sits inside an optimal (X', U-X')-mincut for X in X'."""
    U = sorted(data.draw(st.sets(st.integers(0, g.n - 1), min_size=3, max_size=g.n)))
    X = set(data.draw(st.sets(st.sampled_from(U), min_size=1, max_size=len(U) - 2)))
    X2 = X | set(data.draw(st.sets(st.sampled_from([u for u in U if u not in X]),
                                   max_size=len(U) - len(X) - 1)))

    def optimal_sides(A, B):
        best, sides = None, []
        for bits in range(1 << g.n):
            S = {v for v in range(g.n) if bits >> v & 1}
            if A <= S and not S & B:
                val = cut_value(g, S)
                if best is None or val < best:
                    best, sides = val, [S]
                elif val == best:
                    sides.append(S)
        return sides

    minimal = min(optimal_sides(X, set(U) - X), key=len)
    assert any(minimal <= S for S in optimal_sides(X2, set(U) - X2))


def test_steiner_mincut_equals_matrix_minimum():
    g = random_graph(12, 30, seed=8)
    mat = apmf_bruteforce(g)
    U = [0, 3, 5, 9]
    assert steiner_mincut(g, U) == min(mat[a, b] for a, b in itertools.combinations(U, 2))
