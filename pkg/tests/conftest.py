from __future__ import annotations

import itertools

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ghcut.graph import build_graph
from ghcut.packing import GuideTree

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=2, max_n=8, max_w=6, connected=False):
    """Small simple graphs; with ``connected`` a random spanning tree is added first."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    if connected:
        for v in range(1, n):
            pair = (draw(st.integers(0, v - 1)), v)
            if pair not in chosen:
                chosen.append(pair)
    edges = [(a, b, draw(st.integers(1, max_w))) for a, b in chosen]
    return build_graph(n, edges)


def P3(w1=3, w2=5):
    return build_graph(3, [(0, 1, w1), (1, 2, w2)])


def K(n, w=1):
    return build_graph(n, [(a, b, w) for a, b in itertools.combinations(range(n), 2)])


def path(n, w=1):
    return build_graph(n, [(i, i + 1, w) for i in range(n - 1)])


def cycle(n, w=1):
    return build_graph(n, [(i, (i + 1) % n, w) for i in range(n)])


def star(leaves, w=1):
    return build_graph(leaves + 1, [(0, i, w) for i in range(1, leaves + 1)])


def random_guide_tree(rng, real, n_fake, source):
    """Uniform-attachment random tree over ``real`` plus fake nodes -1..-n_fake."""
    nodes = [source] + [v for v in real if v != source] + [-(i + 1) for i in range(n_fake)]
    order = [nodes[0]] + [nodes[1:][i] for i in rng.permutation(len(nodes) - 1)]
    edges = [(order[int(rng.integers(0, i))], order[i]) for i in range(1, len(order))]
    return GuideTree(tuple(sorted(order)), tuple(edges), source)


def all_cut_values(g):
    """Array indexed by vertex bitmask holding the cut value of that side."""
    masks = np.arange(1 << g.n, dtype=np.int64)
    vals = np.zeros(1 << g.n, dtype=np.int64)
    for u, v, w in g.edges:
        vals += w * (((masks >> u) ^ (masks >> v)) & 1)
    return vals


def optimal_sides(vals, s, t):
    """Bitmasks of every minimum (s, t)-cut side containing s."""
    masks = np.arange(len(vals), dtype=np.int64)
    ok = ((masks >> s) & 1).astype(bool) & ~((masks >> t) & 1).astype(bool)
    best = vals[ok].min()
    return int(best), masks[ok & (vals == best)]
