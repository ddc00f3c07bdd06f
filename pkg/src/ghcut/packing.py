"""Steiner-subgraph packing and guide-tree sampling.

Pipeline: a width-independent multiplicative-weights loop repeatedly asks
Mehlhorn's 2-approximate Steiner tree oracle for a short terminal-spanning
tree under the current edge lengths, adds it to the packing with value
equal to its bottleneck weight, and inflates the lengths of its edges.
Sampling trees from the scaled packing proportionally to their values
yields guide trees for the single-source mincut solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ._kernel import kruskal
from .graph import Graph, GraphError


@dataclass(frozen=True)
class GuideTree:
    """Tree over real graph vertices (ids >= 0) and fake vertices (ids < 0)."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    source: int

    def __post_init__(self) -> None:
        nodes = set(self.nodes)
        if len(nodes) != len(self.nodes):
            raise GraphError("duplicate guide-tree node")
        if self.source not in nodes or self.source < 0:
            raise GraphError("guide-tree source must be a real node of the tree")
        if len(self.edges) != len(self.nodes) - 1:
            raise GraphError("guide tree must have |nodes| - 1 edges")
        for a, b in self.edges:
            if a not in nodes or b not in nodes or a == b:
                raise GraphError(f"bad guide-tree edge ({a}, {b})")
        seen = {self.source}
        stack = [self.source]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != len(nodes):
            raise GraphError("guide tree is not connected")

    @staticmethod
    def is_fake(node: int) -> bool:
        return node < 0

    @cached_property
    def adj(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return out

    @cached_property
    def real(self) -> frozenset[int]:
        """R(T): the tree nodes that are graph vertices."""
        return frozenset(v for v in self.nodes if v >= 0)

    @cached_property
    def fake(self) -> frozenset[int]:
        return frozenset(v for v in self.nodes if v < 0)


@dataclass(frozen=True)
class SteinerSubgraph:
    edges: tuple[int, ...]  # sorted edge indices of the host graph
    terminals: frozenset[int]

    def length(self, lengths: np.ndarray) -> float:
        return float(lengths[list(self.edges)].sum())

    def vertices(self, g: Graph) -> set[int]:
        idx = list(self.edges)
        return set(g.us[idx].tolist()) | set(g.vs[idx].tolist())


def spans_terminals(g: Graph, edges: Iterable[int], terminals: Iterable[int]) -> bool:
    """Whether the terminals are connected inside the edge subset."""
    terms = list(terminals)
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(int(g.us[e])), find(int(g.vs[e]))
        if a != b:
            parent[a] = b
    return len({find(t) for t in terms}) <= 1


def prune_to_steiner_tree(g: Graph, edges: Iterable[int], terminals: Iterable[int],
                          root: int) -> list[int]:
    """Spanning tree of the subgraph (BFS from ``root``), minus non-terminal leaves."""
    terms = set(terminals) | {root}
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(set(edges)):
        u, v = int(g.us[e]), int(g.vs[e])
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    if root not in adj:
        return []
    tree_adj: dict[int, dict[int, int]] = {root: {}}
    order = [root]
    for u in order:
        for v, e in adj[u]:
            if v not in tree_adj:
                tree_adj[v] = {u: e}
                tree_adj[u][v] = e
                order.append(v)
    leaves = [v for v, nb in tree_adj.items() if len(nb) == 1 and v not in terms]
    while leaves:
        v = leaves.pop()
        (u, _), = tree_adj.pop(v).items()
        del tree_adj[u][v]
        if len(tree_adj[u]) == 1 and u not in terms:
            leaves.append(u)
    return sorted({e for nb in tree_adj.values() for e in nb.values()})


class _Mehlhorn:
    """Reusable Mehlhorn solver for one graph and terminal set.

    The symmetric CSR matrix is built once with every arc remembering its
    edge index, so each call only swaps in new lengths.
    """

    def __init__(self, g: Graph, terminals: Sequence[int]):
        self.g = g
        self.terms = np.array(sorted(set(terminals)), dtype=np.int64)
        if len(self.terms) < 2:
            raise GraphError("Steiner tree needs at least two terminals")
        if self.terms.min() < 0 or self.terms.max() >= g.n:
            raise GraphError("terminal out of range")
        rows = np.concatenate([g.us, g.vs])
        cols = np.concatenate([g.vs, g.us])
        order = np.lexsort((cols, rows))
        self.arc_edge = np.concatenate([np.arange(g.m), np.arange(g.m)])[order]
        indptr = np.zeros(g.n + 1, dtype=np.int32)
        np.cumsum(np.bincount(rows, minlength=g.n), out=indptr[1:])
        self.mat = csr_matrix((np.ones(2 * g.m), cols[order].astype(np.int32), indptr),
                              shape=(g.n, g.n))
        # arcs in CSR order carry sorted keys row * n + col
        self.arc_key = (rows * g.n + cols)[order]
        self.term_set = frozenset(self.terms.tolist())
        self.rank = np.full(g.n, -1, dtype=np.int64)
        self.rank[self.terms] = np.arange(len(self.terms))

    def solve(self, lengths: np.ndarray) -> SteinerSubgraph:
        g = self.g
        nt = len(self.terms)
        self.mat.data[:] = lengths[self.arc_edge]
        dist, pred, src = dijkstra(self.mat, directed=True, indices=self.terms,
                                   return_predecessors=True, min_only=True)
        su, sv = src[g.us], src[g.vs]
        cross = np.flatnonzero((su != sv) & (su >= 0) & (sv >= 0))
        hl = dist[g.us[cross]] + lengths[cross] + dist[g.vs[cross]]
        ra, rb = self.rank[su[cross]], self.rank[sv[cross]]
        pair = np.minimum(ra, rb) * nt + np.maximum(ra, rb)
        # cheapest helper edge per terminal pair, ties to the lower edge id
        # (cross is ascending and both sorts are stable, so ties fall to the lower id)
        o = np.lexsort((hl, pair))
        first = np.ones(len(o), dtype=bool)
        first[1:] = pair[o][1:] != pair[o][:-1]
        o = np.sort(o[first])
        o = o[np.argsort(hl[o], kind="stable")]

        picked, root = kruskal(pair[o] // nt, pair[o] % nt, nt)
        if len(picked) < nt - 1:
            comp: dict[int, list[int]] = {}
            for i, t in enumerate(self.terms.tolist()):
                comp.setdefault(int(root[i]), []).append(t)
            groups = sorted(comp.values(), key=lambda c: c[0])
            raise GraphError(f"terminals are disconnected; components {groups}")
        chosen = cross[o][picked]

        # Expand each chosen helper edge into its two shortest-path branches.
        # Branches follow one shortest-path forest and helper edges join
        # distinct cells along a spanning tree, so the union is already a
        # tree whose leaves are terminals; pruning would remove nothing.
        on_path = np.zeros(g.n, dtype=bool)
        frontier = np.unique(np.concatenate([g.us[chosen], g.vs[chosen]]))
        while len(frontier):
            frontier = frontier[~on_path[frontier] & (pred[frontier] >= 0)]
            on_path[frontier] = True
            frontier = np.unique(pred[frontier])
        walked = np.flatnonzero(on_path)
        arc = np.searchsorted(self.arc_key, pred[walked] * g.n + walked)
        edges = np.union1d(chosen, self.arc_edge[arc])
        return SteinerSubgraph(tuple(edges.tolist()), self.term_set)


def mehlhorn_steiner(g: Graph, lengths: Sequence[float], U: Iterable[int]) -> SteinerSubgraph:
    """Steiner tree spanning ``U`` of length at most twice the minimum.

    Multi-source shortest paths from all terminals give each vertex its
    closest terminal; every edge joining two such Voronoi cells becomes a
    helper edge between their terminals, and the helper MST is expanded
    back into graph paths.
    """
    lengths = np.asarray(lengths, dtype=float)
    if len(lengths) != g.m or (lengths <= 0).any():
        raise GraphError("need one positive length per edge")
    return _Mehlhorn(g, list(U)).solve(lengths)


@dataclass
class LengthState:
    """MWU edge lengths; stays within [delta / w(e), (1 + eps) / w(e)]."""

    ell: np.ndarray
    delta: float
    eps: float

    def potential(self, w: np.ndarray) -> float:
        return float(np.dot(w, self.ell))


@dataclass
class Packing:
    entries: list[tuple[SteinerSubgraph, float]]
    raw_values: list[int]        # unscaled integer values, aligned with entries
    scale: float                 # log_{1+eps}((1+eps)/delta)
    eps: float
    delta: float
    augmentations: int
    participations: np.ndarray   # per-edge augmentation counts
    potentials: list[float] = field(default_factory=list)

    @property
    def total_value(self) -> float:
        return sum(v for _, v in self.entries)

    def raw_loads(self, m: int) -> np.ndarray:
        load = np.zeros(m, dtype=np.int64)
        for (h, _), raw in zip(self.entries, self.raw_values):
            load[list(h.edges)] += raw
        return load

    def loads(self, m: int) -> np.ndarray:
        return self.raw_loads(m) / self.scale

    def is_feasible(self, g: Graph) -> bool:
        # compare integer raw load against w(e) * scale to avoid summing floats
        return bool((self.raw_loads(g.m) <= g.ws * self.scale).all())

    def augmentation_bound(self) -> int:
        return math.ceil(self.scale)


def mwu_pack(g: Graph, U: Iterable[int], eps: float, *, trace: bool = False) -> Packing:
    """Fractional Steiner-subgraph packing of value at least lambda(U) / (4 + O(eps))."""
    if not (0.02 <= eps < 0.5):
        raise ValueError("eps must lie in [0.02, 0.5)")
    terms = sorted(set(U))
    if len(terms) < 2:
        raise GraphError("packing needs at least two terminals")
    if g.m == 0:
        raise GraphError(f"terminals are disconnected; components {[[t] for t in terms]}")
    solver = _Mehlhorn(g, terms)
    w = g.ws.astype(float)
    delta = math.exp(-math.log(2 * g.m) / eps)
    state = LengthState(delta / w, delta, eps)
    order: dict[tuple[int, ...], int] = {}
    subgraphs: list[SteinerSubgraph] = []
    raw: list[int] = []
    part = np.zeros(g.m, dtype=np.int64)
    potentials: list[float] = []
    augs = 0
    pot = state.potential(w)
    while pot < 1:
        h = solver.solve(state.ell)
        idx = np.array(h.edges, dtype=np.int64)
        v = int(g.ws[idx].min())
        k = order.get(h.edges)
        if k is None:
            order[h.edges] = len(subgraphs)
            subgraphs.append(h)
            raw.append(v)
        else:
            raw[k] += v
        state.ell[idx] *= 1 + eps * v / w[idx]
        part[idx] += 1
        augs += 1
        pot = state.potential(w)
        if trace:
            potentials.append(pot)
    scale = math.log((1 + eps) / delta) / math.log(1 + eps)
    entries = [(h, r / scale) for h, r in zip(subgraphs, raw)]
    return Packing(entries, raw, scale, eps, delta, augs, part, potentials)


def sample_guide_trees(g: Graph, U: Iterable[int], s: int, trials: int | None = None,
                       rng_seed: int | None = 0, *, eps: float = 0.1,
                       packing: Packing | None = None) -> list[GuideTree]:
    """Sample ``trials`` packing members (default ceil(300 ln n)) as guide trees rooted at ``s``."""
    terms = sorted(set(U))
    if s not in terms:
        raise GraphError("source must be a terminal")
    if trials is None:
        trials = math.ceil(300 * math.log(max(g.n, 2)))
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if packing is None:
        packing = mwu_pack(g, terms, eps)
    cum = np.cumsum([v for _, v in packing.entries])
    rng = np.random.default_rng(rng_seed)
    picks = np.searchsorted(cum, rng.random(trials) * cum[-1], side="right")
    picks = np.minimum(picks, len(cum) - 1)
    out: list[GuideTree] = []
    memo: dict[int, GuideTree] = {}
    for k in picks.tolist():
        if k not in memo:
            memo[k] = subgraph_to_guide_tree(g, packing.entries[k][0].edges, terms, s)
        out.append(memo[k])
    return out


def subgraph_to_guide_tree(g: Graph, edges: Iterable[int], terminals: Iterable[int],
                           s: int) -> GuideTree:
    tree = prune_to_steiner_tree(g, edges, terminals, s)
    pairs = tuple((int(g.us[e]), int(g.vs[e])) for e in tree)
    nodes = sorted({s} | {x for p in pairs for x in p})
    return GuideTree(tuple(nodes), pairs, s)
