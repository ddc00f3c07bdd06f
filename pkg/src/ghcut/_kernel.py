"""Compiled Dinic max-flow on a symmetric CSR arc layout.

Arcs out of vertex u occupy ``indptr[u]:indptr[u + 1]``; ``heads[a]`` is the
arc's endpoint and ``rev[a]`` its antiparallel twin. Capacities are int64.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _levels(indptr, heads, res, kind, level, queue):
    # BFS from every source; sinks get a level but are not expanded
    level[:] = -1
    hi = 0
    for v in range(kind.shape[0]):
        if kind[v] == 1:
            level[v] = 0
            queue[hi] = v
            hi += 1
    lo = 0
    found = False
    while lo < hi:
        u = queue[lo]
        lo += 1
        if kind[u] == 2:
            found = True
            continue
        for a in range(indptr[u], indptr[u + 1]):
            v = heads[a]
            if res[a] > 0 and level[v] < 0:
                level[v] = level[u] + 1
                queue[hi] = v
                hi += 1
    return found


@njit(cache=True)
def _reach(indptr, heads, res, rev, kind, mark, forward, queue):
    # vertices reachable from (forward) or reaching (backward) the `mark` class
    n = indptr.shape[0] - 1
    seen = np.zeros(n, dtype=np.bool_)
    hi = 0
    for v in range(n):
        if kind[v] == mark:
            seen[v] = True
            queue[hi] = v
            hi += 1
    lo = 0
    while lo < hi:
        u = queue[lo]
        lo += 1
        for a in range(indptr[u], indptr[u + 1]):
            v = heads[a]
            # forward walks u->v; backward asks whether v->u (the twin) is open
            c = res[a] if forward else res[rev[a]]
            if c > 0 and not seen[v]:
                seen[v] = True
                queue[hi] = v
                hi += 1
    return seen


@njit(cache=True)
def dinic(indptr, heads, cap, rev, kind):
    """Max flow from all vertices with kind 1 to all vertices with kind 2.

    Returns (value, residual capacities, reachable-from-sources mask,
    reaches-sinks mask).
    """
    n = indptr.shape[0] - 1
    res = cap.copy()
    level = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    it = np.empty(n, dtype=np.int64)
    path = np.empty(n, dtype=np.int64)
    total = 0
    while _levels(indptr, heads, res, kind, level, queue):
        it[:] = indptr[:n]
        for s in range(n):
            if kind[s] != 1:
                continue
            depth = 0
            u = s
            while True:
                if kind[u] == 2:
                    f = res[path[0]]
                    for i in range(1, depth):
                        if res[path[i]] < f:
                            f = res[path[i]]
                    for i in range(depth):
                        res[path[i]] -= f
                        res[rev[path[i]]] += f
                    total += f
                    depth = 0
                    u = s
                    continue
                advanced = False
                while it[u] < indptr[u + 1]:
                    a = it[u]
                    v = heads[a]
                    if res[a] > 0 and level[v] == level[u] + 1:
                        path[depth] = a
                        depth += 1
                        u = v
                        advanced = True
                        break
                    it[u] += 1
                if not advanced:
                    if u == s:
                        break
                    level[u] = -1
                    depth -= 1
                    u = heads[rev[path[depth]]]
                    it[u] += 1
    reach_src = _reach(indptr, heads, res, rev, kind, 1, True, queue)
    reach_snk = _reach(indptr, heads, res, rev, kind, 2, False, queue)
    return total, res, reach_src, reach_snk


@njit(cache=True)
def kruskal(a, b, nodes):
    """Indices of the pairs (a[i], b[i]) kept by Kruskal in the given order.

    Also returns each node's final root so callers can report components.
    """
    parent = np.arange(nodes)
    chosen = np.empty(max(nodes - 1, 0), dtype=np.int64)
    k = 0
    for i in range(a.shape[0]):
        if k == nodes - 1:
            break
        x = a[i]
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        y = b[i]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        if x != y:
            parent[x] = y
            chosen[k] = i
            k += 1
    for v in range(nodes):
        r = v
        while parent[r] != r:
            r = parent[r]
        parent[v] = r
    return chosen[:k], parent
