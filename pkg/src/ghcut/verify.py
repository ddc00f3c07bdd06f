"""Ground-truth oracles and validators used by the tests and the CLI."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, GraphError, cut_value
from .maxflow import max_flow
from .packing import GuideTree, Packing

DIAGONAL = -1
FULL_VALIDATION_LIMIT = 60


def apmf_bruteforce(g: Graph) -> np.ndarray:
    """All-pairs max-flow matrix from n(n-1)/2 direct flows; the diagonal holds -1."""
    out = np.full((g.n, g.n), DIAGONAL, dtype=np.int64)
    for a in range(g.n):
        for b in range(a + 1, g.n):
            out[a, b] = out[b, a] = max_flow(g, a, b).value
    return out


def mincut_enumerate(g: Graph, s: int, t: int) -> int:
    """lambda(s, t) by enumerating every vertex subset; for tiny graphs only."""
    if g.n > 16:
        raise GraphError("enumeration limited to 16 vertices")
    rest = [v for v in range(g.n) if v not in (s, t)]
    us, vs, ws = g.us, g.vs, g.ws
    best = None
    for bits in range(1 << len(rest)):
        side = np.zeros(g.n, dtype=bool)
        side[s] = True
        for i, v in enumerate(rest):
            if bits >> i & 1:
                side[v] = True
        val = int(ws[side[us] != side[vs]].sum())
        if best is None or val < best:
            best = val
    return best


@dataclass(frozen=True)
class Violation:
    pair: tuple[int, int] | None
    expected: int | None
    got: int | None
    reason: str


def validate_ghtree(g: Graph, t, *, full_limit: int = FULL_VALIDATION_LIMIT,
                    spot_checks: int = 200, rng_seed: int = 0) -> Violation | None:
    """First violation of the cut-tree property, or None.

    Every pair is checked when n <= ``full_limit``; larger graphs get
    ``spot_checks`` random pairs. For each pair the tree value must equal
    lambda in ``g`` and the f-preimage side of the tree cut must realise it.
    """
    from .ghtree import tree_query

    U = sorted(t.terminals)
    if any(not 0 <= u < g.n for u in U):
        return Violation(None, None, None, "terminal outside the graph")
    if len(t.edges) != len(U) - 1:
        return Violation(None, len(U) - 1, len(t.edges), "wrong number of tree edges")
    parent = {u: u for u in U}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in t.edges:
        if a not in parent or b not in parent:
            return Violation((a, b), None, None, "tree edge leaves the terminal set")
        ra, rb = find(a), find(b)
        if ra == rb:
            return Violation((a, b), None, None, "tree has a cycle")
        parent[ra] = rb
    if len(t.f) != g.n or any(t.f.get(v) not in parent for v in range(g.n)):
        return Violation(None, None, None, "representative map is not total into U")
    for u in U:
        if t.f[u] != u:
            return Violation((u, t.f[u]), u, t.f[u], "terminal not mapped to itself")

    pairs = list(itertools.combinations(U, 2))
    if g.n > full_limit and len(pairs) > spot_checks:
        pairs = random.Random(rng_seed).sample(pairs, spot_checks)
    for a, b in pairs:
        lam = max_flow(g, a, b).value
        val, cut = tree_query(t, a, b)
        if val != lam:
            return Violation((a, b), lam, val, "tree value differs from max-flow")
        got = cut_value(g, cut.side)
        if a not in cut.side or b in cut.side:
            return Violation((a, b), lam, got, "tree cut does not separate the pair")
        if got != lam:
            return Violation((a, b), lam, got, "tree cut value differs from max-flow")
    return None


def check_k_respecting(T: GuideTree, side: Iterable[int], k: int) -> tuple[bool, int, dict[int, bool]]:
    """Minimum number of tree edges cut by ``side`` when fake nodes choose sides freely.

    Returns (min crossing <= k, min crossing, fake node -> in side).
    """
    side = set(side)
    root = T.source
    parent = {root: None}
    order = [root]
    for u in order:
        for v in T.adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
    inf = float("inf")
    # cost[u][b]: min crossings inside u's subtree when u sits on side b (1 = in side)
    cost: dict[int, list[float]] = {}
    for u in reversed(order):
        allowed = (u in side,) if u >= 0 else (False, True)
        row = [inf, inf]
        for b in allowed:
            total = 0
            for v in T.adj[u]:
                if v == parent[u]:
                    continue
                total += min(cost[v][b], cost[v][1 - b] + 1)
            row[int(b)] = total
        cost[u] = row
    best_root = 0 if cost[root][0] <= cost[root][1] else 1
    crossing = int(cost[root][best_root])
    chosen = {root: best_root}
    for u in order[1:]:
        pb = chosen[parent[u]]
        chosen[u] = pb if cost[u][pb] <= cost[u][1 - pb] + 1 else 1 - pb
    assignment = {u: bool(b) for u, b in chosen.items() if u < 0}
    return crossing <= k, crossing, assignment


def crossing_count(T: GuideTree, side: Iterable[int], fake_in: Iterable[int] = ()) -> int:
    members = set(side) | set(fake_in)
    return sum((a in members) != (b in members) for a, b in T.edges)


def brute_min_steiner_tree(g: Graph, lengths: Sequence[float], U: Iterable[int]) -> tuple[float, tuple[int, ...]]:
    """Exact minimum Steiner tree by enumerating vertex supersets of U and taking their MSTs."""
    U = sorted(set(U))
    if g.n > 14 or len(U) > 6:
        raise GraphError("brute-force Steiner tree limited to n <= 14 and |U| <= 6")
    lengths = np.asarray(lengths, dtype=float)
    others = [v for v in range(g.n) if v not in U]
    order = sorted(range(g.m), key=lambda e: (lengths[e], e))
    us, vs = g.us.tolist(), g.vs.tolist()
    best: tuple[float, tuple[int, ...]] | None = None
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            verts = set(U) | set(extra)
            parent = {v: v for v in verts}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            tree, total = [], 0.0
            for e in order:
                a, b = us[e], vs[e]
                if a in verts and b in verts:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
                        tree.append(e)
                        total += lengths[e]
            if len(tree) == len(verts) - 1 and (best is None or total < best[0] - 1e-12):
                best = (total, tuple(sorted(tree)))
    if best is None:
        raise GraphError("terminals are disconnected")
    return best


def check_packing(g: Graph, p: Packing) -> bool:
    """Recompute per-edge loads from the entries and compare against weights."""
    load = np.zeros(g.m)
    for h, val in p.entries:
        for e in h.edges:
            load[e] += val
    return bool((load <= g.ws * (1 + 1e-12)).all()) and p.is_feasible(g)
