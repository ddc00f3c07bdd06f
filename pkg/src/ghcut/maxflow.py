"""Exact integer s-t max-flow with minimal and maximal source-side mincuts.

Three engines compute the same thing:

* ``"native"``: compiled Dinic on int64 capacities (the default).
* ``"dinic"``: blocking-flow Dinic in pure Python on arbitrary-precision ints.
* ``"scipy"``: ``scipy.sparse.csgraph.maximum_flow``, int32 only.

``"auto"`` picks native unless the total weight could overflow int64.

Undirected edges are modelled as antiparallel arc pairs. Results are
deterministic and memoised per ``(graph, s, t)``; the cache only affects
speed, instrumentation counts every logical call.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from . import stats
from .graph import Cut, Graph, GraphError, _merged, contract

INT32_LIMIT = 2**31 - 1
INT64_SAFE = 2**62
BACKENDS = ("auto", "native", "scipy", "dinic")
_backend = "auto"
_CACHE_LIMIT = 50_000
_cache: dict[tuple[Graph, int, int, str], "FlowResult"] = {}


@dataclass(frozen=True)
class FlowResult:
    value: int
    min_source_side: Cut
    max_source_side: Cut
    edge_flow: np.ndarray  # signed flow per edge index, positive means us -> vs


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown max-flow backend {name!r}")
    _backend = name


def get_backend() -> str:
    return _backend


def clear_cache() -> None:
    _cache.clear()


def _resolve(g: Graph, backend: str | None) -> str:
    b = backend or _backend
    if b == "auto":
        return "native" if g.total_weight < INT64_SAFE else "dinic"
    if b == "scipy" and g.total_weight > INT32_LIMIT:
        raise GraphError("scipy backend requires total weight below 2^31")
    if b == "native" and g.total_weight >= INT64_SAFE:
        raise GraphError("native backend requires total weight below 2^62")
    return b


def max_flow(g: Graph, s: int, t: int, *, backend: str | None = None) -> FlowResult:
    """Maximum s-t flow value plus the minimal and maximal s-side mincuts.

    ``min_source_side`` is the set reachable from ``s`` in the residual
    network; ``max_source_side`` is everything that cannot reach ``t``.
    """
    if s == t:
        raise GraphError("max_flow requires s != t")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise GraphError("source or sink out of range")
    engine = _resolve(g, backend)
    key = (g, s, t, engine)
    hit = _cache.get(key)
    stats.record_flow(g.n, g.m, hit is None)
    if hit is not None:
        return hit
    if engine == "native":
        res = _native_flow(g, s, t)
    elif engine == "scipy":
        res = _scipy_flow(g, s, t)
    else:
        res = _dinic_flow(g, s, t)
    if len(_cache) >= _CACHE_LIMIT:
        _cache.clear()
    _cache[key] = res
    return res


def _sides(g: Graph, s: int, t: int, value: int, edge_flow: np.ndarray,
           reach_s: np.ndarray, reach_t: np.ndarray) -> FlowResult:
    lo = frozenset(np.flatnonzero(reach_s).tolist())
    hi = frozenset(np.flatnonzero(~reach_t).tolist())
    edge_flow = np.asarray(edge_flow)
    edge_flow.setflags(write=False)
    return FlowResult(value, Cut(lo, value), Cut(hi, value), edge_flow)


@dataclass(frozen=True)
class _Arcs:
    """Symmetric CSR arc layout: per arc its head, capacity, reverse arc and tail."""

    indptr: np.ndarray
    heads: np.ndarray
    cap: np.ndarray
    rev: np.ndarray
    fwd_arc: np.ndarray  # arc index of us[i] -> vs[i]
    row_of: np.ndarray

    @cached_property
    def csr(self) -> csr_matrix:
        n = len(self.indptr) - 1
        return csr_matrix((self.cap.astype(np.int32), self.heads.astype(np.int32),
                           self.indptr.astype(np.int32)), shape=(n, n))


@lru_cache(maxsize=256)
def _arcs(g: Graph) -> _Arcs:
    rows = np.concatenate([g.us, g.vs])
    cols = np.concatenate([g.vs, g.us])
    order = np.lexsort((cols, rows))
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=g.n), out=indptr[1:])
    cap = np.concatenate([g.ws, g.ws]).astype(np.int64)[order]
    pos = np.empty(2 * g.m, dtype=np.int64)
    pos[order] = np.arange(2 * g.m)
    # original arc j < m is us->vs of edge j, arc j + m its reverse
    rev = np.empty(2 * g.m, dtype=np.int64)
    rev[pos[:g.m]] = pos[g.m:]
    rev[pos[g.m:]] = pos[:g.m]
    return _Arcs(indptr, cols[order].astype(np.int64), cap, rev, pos[:g.m], rows[order])


def _native_flow(g: Graph, s: int, t: int) -> FlowResult:
    from ._kernel import dinic

    arcs = _arcs(g)
    kind = np.zeros(g.n, dtype=np.int8)
    kind[s], kind[t] = 1, 2
    value, res, reach_s, reach_t = dinic(arcs.indptr, arcs.heads, arcs.cap, arcs.rev, kind)
    fwd = arcs.fwd_arc
    edge_flow = (arcs.cap[fwd] - res[fwd]) if g.m else np.zeros(0, dtype=np.int64)
    return _sides(g, s, t, int(value), edge_flow, reach_s, reach_t)


def _bfs(arcs: _Arcs, open_arcs: np.ndarray, root: int) -> np.ndarray:
    """Vertices reachable from ``root`` along open arcs, one frontier at a time."""
    tails = arcs.row_of[open_arcs]
    heads = arcs.heads[open_arcs]
    seen = np.zeros(len(arcs.indptr) - 1, dtype=bool)
    seen[root] = True
    while True:
        step = seen[tails] & ~seen[heads]
        if not step.any():
            return seen
        seen[heads[step]] = True


def _scipy_flow(g: Graph, s: int, t: int) -> FlowResult:
    arcs = _arcs(g)
    cap = arcs.csr
    res = maximum_flow(cap, s, t, method="dinic")
    flow = res.flow
    if not (np.array_equal(flow.indptr, cap.indptr) and np.array_equal(flow.indices, cap.indices)):
        flow = _align(flow, cap)
    resid = cap.data.astype(np.int64) - flow.data
    reach_s = _bfs(arcs, resid > 0, s)
    # y reaches t iff t is reached from y; walk arcs backwards via their reverses
    reach_t = _bfs(arcs, resid[arcs.rev] > 0, t)
    edge_flow = flow.data[arcs.fwd_arc].astype(np.int64)
    return _sides(g, s, t, int(res.flow_value), edge_flow, reach_s, reach_t)


def _align(flow, cap: csr_matrix):
    # defensive: re-express the flow on the capacity matrix's arc layout
    f = flow.tocsr()
    vals = np.asarray(f[np.repeat(np.arange(cap.shape[0]), np.diff(cap.indptr)),
                        cap.indices]).ravel()
    return csr_matrix((vals, cap.indices, cap.indptr), shape=cap.shape)


def _dinic_flow(g: Graph, s: int, t: int) -> FlowResult:
    n, m = g.n, g.m
    # arc 2i: us[i] -> vs[i], arc 2i+1: reverse; both start at capacity w
    head: list[int] = [0] * (2 * m)
    cap: list[int] = [0] * (2 * m)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v, w) in enumerate(g.edges):
        head[2 * i], head[2 * i + 1] = v, u
        cap[2 * i] = cap[2 * i + 1] = w
        adj[u].append(2 * i)
        adj[v].append(2 * i + 1)

    value = 0
    while True:
        level = [-1] * n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for a in adj[u]:
                v = head[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            pushed = _dinic_augment(s, t, adj, head, cap, level, it)
            if pushed == 0:
                break
            value += pushed

    orig = [w for w in g.ws.tolist()]
    edge_flow = np.array([orig[i] - cap[2 * i] for i in range(m)], dtype=object)
    reach_s = _reach(n, s, adj, head, cap, forward=True)
    reach_t = _reach(n, t, adj, head, cap, forward=False)
    return _sides(g, s, t, value, edge_flow, reach_s, reach_t)


def _dinic_augment(s, t, adj, head, cap, level, it) -> int:
    # one augmenting path in the level graph, found iteratively
    path: list[int] = []
    u = s
    while True:
        if u == t:
            f = min(cap[a] for a in path)
            for a in path:
                cap[a] -= f
                cap[a ^ 1] += f
            return f
        advanced = False
        while it[u] < len(adj[u]):
            a = adj[u][it[u]]
            v = head[a]
            if cap[a] > 0 and level[v] == level[u] + 1:
                path.append(a)
                u = v
                advanced = True
                break
            it[u] += 1
        if not advanced:
            if u == s:
                return 0
            level[u] = -1  # dead end
            a = path.pop()
            u = head[a ^ 1]
            it[u] += 1


def _reach(n, root, adj, head, cap, *, forward: bool) -> np.ndarray:
    seen = np.zeros(n, dtype=bool)
    seen[root] = True
    q = deque([root])
    while q:
        u = q.popleft()
        for a in adj[u]:
            v = head[a]
            # forward: residual arc u->v is a; backward: arc v->u is a^1
            c = cap[a] if forward else cap[a ^ 1]
            if c > 0 and not seen[v]:
                seen[v] = True
                q.append(v)
    return seen


def flow_between_sets(g: Graph, sources, sinks, *, backend: str | None = None) -> Cut:
    """Minimal ``(sources, sinks)``-mincut: the residual-reachable source side."""
    sources = frozenset(sources)
    sinks = frozenset(sinks)
    if not sources or not sinks or sources & sinks:
        raise GraphError("source and sink sets must be non-empty and disjoint")
    if _resolve(g, backend) == "native":
        src, snk = g.mask(sources), g.mask(sinks)
        # size of the equivalent contracted instance, for the counters
        internal = (src[g.us] & src[g.vs]) | (snk[g.us] & snk[g.vs])
        value, side = _native_sets(g, src, snk, g.n - len(sources) - len(sinks) + 2,
                                   int(g.m - internal.sum()))
        return Cut(frozenset(np.flatnonzero(side).tolist()), value)
    h, cmap = contract(g, [sources, sinks])
    s = cmap.image[next(iter(sources))]
    t = cmap.image[next(iter(sinks))]
    res = max_flow(h, s, t, backend=backend)
    return Cut(cmap.expand(res.min_source_side.side), res.value)


def _native_sets(g: Graph, src: np.ndarray, snk: np.ndarray, n_eff: int, m_eff: int):
    """Compiled set-to-set flow on ``g``'s own arcs; returns (value, source-side mask)."""
    from ._kernel import dinic

    stats.record_flow(n_eff, m_eff, True)
    kind = src.astype(np.int8)
    kind[snk] = 2
    arcs = _arcs(g)
    value, _, side, _ = dinic(arcs.indptr, arcs.heads, arcs.cap, arcs.rev, kind)
    return int(value), side


def region_flow(g: Graph, terminals, region: np.ndarray, *, backend: str | None = None) -> Cut:
    """Minimal ``(terminals, V - region)``-mincut.

    ``region`` (vertex ids, containing ``terminals``) is where the source side
    may grow; everything else acts as one sink. Only edges touching the region
    take part, so disjoint regions cost O(m) in total.
    """
    terminals = frozenset(terminals)
    inreg = np.zeros(g.n, dtype=bool)
    inreg[region] = True
    touching = inreg[g.us] | inreg[g.vs]
    if _resolve(g, backend) == "native" and not inreg.all():
        value, side = _native_sets(g, g.mask(terminals), ~inreg,
                                   int(inreg.sum()) - len(terminals) + 2, int(touching.sum()))
        return Cut(frozenset(np.flatnonzero(side).tolist()), value)
    # local ids: 0 = contracted terminals (source), 1 = outside (sink), then the rest
    inner = [v for v in np.flatnonzero(inreg).tolist() if v not in terminals]
    local = np.ones(g.n, dtype=np.int64)
    local[list(terminals)] = 0
    local[inner] = np.arange(2, 2 + len(inner))
    eids = np.flatnonzero(touching)
    lu, lv = local[g.us[eids]], local[g.vs[eids]]
    keep = lu != lv
    h = _merged(2 + len(inner), lu[keep], lv[keep], g.ws[eids][keep])
    res = max_flow(h, 0, 1, backend=backend)
    side = set(terminals)
    side.update(inner[x - 2] for x in res.min_source_side.side if x >= 2)
    return Cut(frozenset(side), res.value)
