"""Weighted undirected graphs, cut values and contraction.

Graphs are immutable. Vertex ids are dense integers ``0..n-1``; parallel
edges are merged by summing their weights and self-loops are dropped.
Edges are kept sorted by ``(min endpoint, max endpoint)`` so two graphs
built from the same multiset of edges compare (and hash) equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

W_MAX = 2**30


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Cut:
    """One side of a vertex bipartition together with its cut value."""

    side: frozenset[int]
    value: int

    def __len__(self) -> int:
        return len(self.side)


@dataclass(frozen=True)
class ContractionMap:
    """Provenance of a contracted graph.

    ``origin[x]`` is the set of original vertices merged into ``x``;
    ``image[v]`` is the contracted vertex holding original vertex ``v``.
    """

    image: tuple[int, ...]

    @cached_property
    def origin(self) -> tuple[frozenset[int], ...]:
        groups: list[list[int]] = [[] for _ in range(max(self.image, default=-1) + 1)]
        for v, x in enumerate(self.image):
            groups[x].append(v)
        return tuple(frozenset(o) for o in groups)

    def expand(self, side: Iterable[int]) -> frozenset[int]:
        side = set(side)
        return frozenset(v for v, x in enumerate(self.image) if x in side)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Graph:
    """Immutable weighted undirected simple graph.

    Use :func:`build_graph` to construct one from raw (possibly parallel)
    edges. ``us[i] < vs[i]`` holds for every edge index ``i``.
    """

    __slots__ = ("n", "us", "vs", "ws", "dropped_self_loops", "__dict__")

    def __init__(self, n: int, us: np.ndarray, vs: np.ndarray, ws: np.ndarray,
                 dropped_self_loops: int = 0):
        self.n = int(n)
        self.us = _readonly(np.asarray(us, dtype=np.int64))
        self.vs = _readonly(np.asarray(vs, dtype=np.int64))
        self.ws = _readonly(np.asarray(ws, dtype=np.int64))
        self.dropped_self_loops = dropped_self_loops

    @property
    def m(self) -> int:
        return len(self.ws)

    @cached_property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(zip(self.us.tolist(), self.vs.tolist(), self.ws.tolist()))

    @cached_property
    def total_weight(self) -> int:
        return int(self.ws.sum())

    @cached_property
    def max_weight(self) -> int:
        return int(self.ws.max()) if self.m else 0

    @cached_property
    def _key(self) -> tuple:
        return (self.n, self.us.tobytes(), self.vs.tobytes(), self.ws.tobytes())

    @cached_property
    def _hash(self) -> int:
        return hash(self._key)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Graph):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, W={self.max_weight})"

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # incidence in CSR form: for vertex v, nbr[indptr[v]:indptr[v+1]]
        # are its neighbours and eid[...] the matching edge indices
        src = np.concatenate([self.us, self.vs])
        dst = np.concatenate([self.vs, self.us])
        eid = np.concatenate([np.arange(self.m), np.arange(self.m)])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, dst[order], eid[order]

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adjacency[v]`` lists ``(neighbour, edge index)`` pairs."""
        indptr, nbr, eid = self._csr
        nbr_l, eid_l, ptr = nbr.tolist(), eid.tolist(), indptr.tolist()
        return tuple(
            tuple(zip(nbr_l[ptr[v]:ptr[v + 1]], eid_l[ptr[v]:ptr[v + 1]]))
            for v in range(self.n)
        )

    def incident_edges(self, vertices: Iterable[int]) -> np.ndarray:
        """Indices of edges with at least one endpoint in ``vertices``."""
        indptr, _, eid = self._csr
        vs = np.fromiter(vertices, dtype=np.int64)
        if len(vs) == 0:
            return np.zeros(0, dtype=np.int64)
        parts = [eid[indptr[v]:indptr[v + 1]] for v in vs.tolist()]
        return np.unique(np.concatenate(parts))

    def degree(self, v: int) -> int:
        indptr, _, eid = self._csr
        return int(self.ws[eid[indptr[v]:indptr[v + 1]]].sum())

    @cached_property
    def components(self) -> tuple[int, ...]:
        """Connected-component label per vertex (labels are smallest member)."""
        label = list(range(self.n))
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in zip(self.us.tolist(), self.vs.tolist()):
            ru, rv = find(u), find(v)
            if ru != rv:
                if ru < rv:
                    parent[rv] = ru
                else:
                    parent[ru] = rv
        for v in range(self.n):
            label[v] = find(v)
        return tuple(label)

    def mask(self, side: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        idx = np.fromiter(side, dtype=np.int64)
        if len(idx) and (idx.min() < 0 or idx.max() >= self.n):
            raise GraphError("vertex id out of range")
        m[idx] = True
        return m


def _merged(n: int, us: np.ndarray, vs: np.ndarray, ws: np.ndarray) -> Graph:
    """Graph from endpoint arrays with ``us != vs``; merges parallel edges."""
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    if len(lo) == 0:
        e = np.zeros(0, dtype=np.int64)
        return Graph(n, e, e, e)
    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    key = key[order]
    start = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    uniq = key[start]
    wsum = np.add.reduceat(np.asarray(ws, dtype=np.int64)[order], start)
    return Graph(n, uniq // n, uniq % n, wsum)


def build_graph(n: int, raw_edges: Iterable[Sequence[int]], *, w_max: int = W_MAX) -> Graph:
    """Build a graph from ``(u, v, w)`` triples.

    Parallel edges are merged by weight sum, self-loops are dropped (and
    counted in ``dropped_self_loops``). Raises :class:`GraphError` on
    non-positive weights, weights above ``w_max`` or out-of-range ids.
    """
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    us: list[int] = []
    vs: list[int] = []
    ws: list[int] = []
    loops = 0
    for i, e in enumerate(raw_edges):
        if len(e) != 3:
            raise GraphError(f"edge {i}: expected (u, v, w), got {e!r}")
        u, v, w = (int(x) for x in e)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {i}: vertex id out of range [0, {n})")
        if w <= 0:
            raise GraphError(f"edge {i}: weight must be positive, got {w}")
        if w > w_max:
            raise GraphError(f"edge {i}: weight {w} exceeds maximum {w_max}")
        if u == v:
            loops += 1
            continue
        us.append(u)
        vs.append(v)
        ws.append(w)
    g = _merged(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64),
                np.array(ws, dtype=np.int64))
    g.dropped_self_loops = loops
    return g


def _check_side(g: Graph, side: Iterable[int]) -> np.ndarray:
    mask = g.mask(side)
    k = int(mask.sum())
    if k == 0 or k == g.n:
        raise GraphError("cut side must be a non-empty proper subset of V")
    return mask


def cut_value(g: Graph, side: Iterable[int]) -> int:
    """Total weight of edges with exactly one endpoint in ``side``."""
    mask = _check_side(g, side)
    return int(g.ws[mask[g.us] != mask[g.vs]].sum())


def make_cut(g: Graph, side: Iterable[int]) -> Cut:
    side = frozenset(side)
    return Cut(side, cut_value(g, side))


def contract(g: Graph, blocks: Sequence[Iterable[int]]) -> tuple[Graph, ContractionMap]:
    """Contract each block to a single vertex.

    Vertices outside every block stay as singletons. New ids are assigned
    in increasing order of each block's smallest original vertex, so an
    empty ``blocks`` list yields an identical graph with the identity map.
    """
    arrays = [np.fromiter((int(v) for v in block), dtype=np.int64) for block in blocks]
    members = np.concatenate(arrays) if arrays else np.zeros(0, dtype=np.int64)
    if len(members) and (members.min() < 0 or members.max() >= g.n):
        bad = members[(members < 0) | (members >= g.n)][0]
        raise GraphError(f"block vertex {bad} out of range")
    seen = np.zeros(g.n, dtype=bool)
    rep = np.arange(g.n, dtype=np.int64)
    for arr in arrays:
        arr = np.unique(arr)
        if not len(arr):
            continue
        if seen[arr].any():
            raise GraphError(f"vertex {arr[seen[arr]][0]} appears in more than one block")
        seen[arr] = True
        # representative = smallest member; ids follow representative order
        rep[arr] = arr[0]
    reps = np.unique(rep)
    image = np.searchsorted(reps, rep)
    iu = image[g.us]
    iv = image[g.vs]
    keep = iu != iv
    h = _merged(len(reps), iu[keep], iv[keep], g.ws[keep])
    cmap = ContractionMap(tuple(image.tolist()))
    return h, cmap


def random_graph(n: int, m: int, w_range: tuple[int, int] = (1, 20), seed: int = 0,
                 *, connected: bool = True) -> Graph:
    """Seeded simple random graph with about ``m`` edges.

    With ``connected`` a random spanning tree comes first, so the result
    is connected whenever n >= 1; ``m`` is capped at n(n-1)/2.
    """
    import random

    rng = random.Random(seed)
    m = min(m, n * (n - 1) // 2)
    lo, hi = w_range
    seen: set[tuple[int, int]] = set()
    edges = []
    if connected:
        for v in range(1, n):
            u = rng.randrange(v)
            seen.add((u, v))
            edges.append((u, v, rng.randint(lo, hi)))
    while len(edges) < m:
        a, b = sorted(rng.sample(range(n), 2))
        if (a, b) not in seen:
            seen.add((a, b))
            edges.append((a, b, rng.randint(lo, hi)))
    return build_graph(n, edges)
