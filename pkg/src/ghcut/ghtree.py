"""Gomory-Hu (Steiner) trees: classic, Gusfield, and the recursive isolating-cut construction.

A ``GhTree`` lives on a terminal set ``U`` and carries a representative
map ``f`` from every graph vertex to a terminal. For a pair ``a, b`` the
lightest edge on the tree path gives ``lambda(a, b)``, and the preimage
under ``f`` of a's component after deleting that edge is a mincut.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from . import stats
from .graph import Cut, Graph, GraphError, contract
from .isolating import isolating_cuts
from .maxflow import max_flow
from .ssmc import PIPELINE_CONFIG, SsmcConfig, derive_seed, sstm_no_promise

SCHEMA = 1


@dataclass(frozen=True)
class GhTree:
    terminals: frozenset[int]
    edges: tuple[tuple[int, int, int], ...]  # (a, b, w), a < b, sorted
    f: Mapping[int, int] = field(hash=False)

    @staticmethod
    def make(terminals: Iterable[int], edges: Iterable[tuple[int, int, int]],
             f: Mapping[int, int]) -> "GhTree":
        norm = sorted((min(a, b), max(a, b), int(w)) for a, b, w in edges)
        return GhTree(frozenset(int(u) for u in terminals), tuple(norm),
                      {int(v): int(r) for v, r in sorted(f.items())})

    @property
    def is_plain(self) -> bool:
        return self.terminals == frozenset(range(len(self.f))) and \
            all(v == r for v, r in self.f.items())


@dataclass
class StepResult:
    index: int
    D: frozenset[int]
    parts: list[tuple[int, Cut]]  # (pivot v, minimal isolating cut S_v)


class TreeValidationError(RuntimeError):
    def __init__(self, violation):
        super().__init__(f"tree failed validation: {violation}")
        self.violation = violation


# ---------------------------------------------------------------- classic

def gomory_hu_classic(g: Graph) -> GhTree:
    """The original construction: split supernodes with n - 1 flows on contracted graphs."""
    if g.n < 1:
        raise GraphError("graph must have at least one vertex")
    groups: dict[int, set[int]] = {0: set(range(g.n))}
    tree: dict[int, dict[int, int]] = {0: {}}
    nxt = 1
    while True:
        x = next((k for k, grp in groups.items() if len(grp) >= 2), None)
        if x is None:
            break
        members = sorted(groups[x])
        s, t = members[0], members[1]
        blocks, via = [], []
        for y in sorted(tree[x]):
            seen, stack = {x, y}, [y]
            verts = set(groups[y])
            while stack:
                u = stack.pop()
                for z in tree[u]:
                    if z not in seen:
                        seen.add(z)
                        verts |= groups[z]
                        stack.append(z)
            blocks.append(verts)
            via.append(y)
        h, cmap = contract(g, blocks)
        res = max_flow(h, cmap.image[s], cmap.image[t])
        side = cmap.expand(res.min_source_side.side)
        xs = groups[x] & side
        xt = groups[x] - side
        new = nxt
        nxt += 1
        groups[x], groups[new] = xs, xt
        tree[new] = {}
        for y, blk in zip(via, blocks):
            if next(iter(blk)) not in side:
                w = tree[x].pop(y)
                del tree[y][x]
                tree[new][y] = tree[y][new] = w
        tree[x][new] = tree[new][x] = res.value
    label = {k: next(iter(grp)) for k, grp in groups.items()}
    edges = {(min(label[a], label[b]), max(label[a], label[b]), w)
             for a, nb in tree.items() for b, w in nb.items()}
    return GhTree.make(range(g.n), edges, {v: v for v in range(g.n)})


def gusfield(g: Graph) -> GhTree:
    """Cut tree from n - 1 flows on the original graph (Gusfield's re-linking rule)."""
    if g.n < 1:
        raise GraphError("graph must have at least one vertex")
    p = [0] * g.n
    fl = [0] * g.n
    for s in range(1, g.n):
        t = p[s]
        res = max_flow(g, s, t)
        side = res.min_source_side.side
        fl[s] = res.value
        for i in range(g.n):
            if i != s and i in side and p[i] == t:
                p[i] = s
        if p[t] in side:
            p[s], p[t] = p[t], s
            fl[s], fl[t] = fl[t], res.value
    edges = [(s, p[s], fl[s]) for s in range(1, g.n)]
    return GhTree.make(range(g.n), edges, {v: v for v in range(g.n)})


# ---------------------------------------------------------------- recursive

def ghtree_step(g: Graph, s: int, U: Iterable[int], cfg: SsmcConfig | None = None) -> StepResult:
    """One round of simultaneous splits around pivot ``s``.

    Iteration i takes minimal isolating cuts of the singletons of a random
    terminal subset R^i (halving each round, always keeping s) and keeps
    the cuts that are (s, v)-mincuts holding at most half of U.
    """
    cfg = cfg or SsmcConfig()
    U = frozenset(int(u) for u in U)
    if len(U) < 2 or s not in U:
        raise GraphError("need |U| >= 2 and s in U")
    lam = sstm_no_promise(g, U, s, cfg)  # same g and s every round, so computed once
    rng = np.random.default_rng(derive_seed(cfg.seed, 3))
    R = sorted(U)
    best = StepResult(0, frozenset(), [])
    for i in range(int(math.floor(math.log2(len(U)))) + 1):
        if len(R) >= 2:
            cuts = isolating_cuts(g, [[v] for v in R])
            parts = [(v, cut) for v, cut in zip(R, cuts)
                     if v != s and cut.value == lam[v] and 2 * len(cut.side & U) <= len(U)]
            D = frozenset().union(*(cut.side & U for _, cut in parts))
            stats.append("ghtree_step_sizes", len(D))
            if len(D) > len(best.D):
                best = StepResult(i, D, parts)
        R = [v for v in R if v == s or rng.random() < 0.5]
    return best


def ghtree_fast(g: Graph, U: Iterable[int] | None = None, cfg: SsmcConfig | None = None, *,
                validate: bool = False, retries: int = 3, **validate_kw) -> GhTree:
    """Gomory-Hu Steiner tree by recursive isolating-cut splitting.

    Monte-Carlo: with ``validate`` the tree is checked and rebuilt from a
    fresh derived seed up to ``retries`` times before giving up.
    """
    from .verify import validate_ghtree

    cfg = cfg or PIPELINE_CONFIG
    terms = sorted(set(range(g.n) if U is None else (int(u) for u in U)))
    if not terms:
        raise GraphError("need at least one terminal")
    if terms[0] < 0 or terms[-1] >= g.n:
        raise GraphError("terminal out of range")
    violation = None
    for attempt in range(retries + 1 if validate else 1):
        if attempt:
            stats.bump("ghtree_retries")
        t = _ghtree(g, terms, cfg, derive_seed(cfg.seed, 4, attempt), 0)
        if not validate:
            return t
        violation = validate_ghtree(g, t, **validate_kw)
        if violation is None:
            return t
    raise TreeValidationError(violation)


def _ghtree(g: Graph, U: list[int], cfg: SsmcConfig, seed: int, depth: int) -> GhTree:
    stats.high_water("ghtree_depth", depth)
    stats.bump("ghtree_nodes")
    if len(U) == 1:
        return GhTree.make(U, (), {v: U[0] for v in range(g.n)})
    rng = np.random.default_rng(seed)
    step = None
    for j, s in enumerate(rng.permutation(U).tolist()):
        step = ghtree_step(g, s, U, replace(cfg, seed=derive_seed(seed, 5, j)))
        if step.D:
            break
        stats.bump("ghtree_empty_steps")
    if not step.D:
        raise RuntimeError("no pivot produced a split")
    Uset = set(U)

    edges: list[tuple[int, int, int]] = []
    f: dict[int, int] = {}
    links = []
    for j, (v, cut) in enumerate(step.parts):
        outside = [x for x in range(g.n) if x not in cut.side]
        gv, cmap = contract(g, [outside])
        back = {cmap.image[x]: x for x in cut.side}
        xv = cmap.image[outside[0]]
        sub = _ghtree(gv, sorted(cmap.image[u] for u in cut.side & Uset),
                      cfg, derive_seed(seed, 6, j), depth + 1)
        edges += [(back[a], back[b], w) for a, b, w in sub.edges]
        for x in cut.side:
            f[x] = back[sub.f[cmap.image[x]]]
        links.append((back[sub.f[xv]], v, cut.value))

    blocks = [cut.side for _, cut in step.parts]
    gl, cmap_l = contract(g, blocks)
    back_l = {cmap_l.image[x]: x for x in range(g.n) if not any(x in b for b in blocks)}
    sub = _ghtree(gl, sorted(cmap_l.image[u] for u in U if u not in step.D),
                  cfg, derive_seed(seed, 7), depth + 1)
    edges += [(back_l[a], back_l[b], w) for a, b, w in sub.edges]
    for x in range(g.n):
        if x not in f:
            f[x] = back_l[sub.f[cmap_l.image[x]]]
    for rep_v, v, w in links:
        edges.append((rep_v, back_l[sub.f[cmap_l.image[v]]], w))
    return GhTree.make(U, edges, f)


# ---------------------------------------------------------------- queries

def _adjacency(t: GhTree) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {u: [] for u in t.terminals}
    for a, b, w in t.edges:
        adj[a].append((b, w))
        adj[b].append((a, w))
    return adj


def tree_query(t: GhTree, a: int, b: int) -> tuple[int, Cut]:
    """(lambda(a, b), a-side mincut) read off the tree.

    Among equally light path edges the one closest to ``b`` is cut.
    """
    if a == b:
        raise GraphError("query needs two distinct terminals")
    if a not in t.terminals or b not in t.terminals:
        raise GraphError(f"unknown terminal in query ({a}, {b})")
    adj = _adjacency(t)
    parent = {b: None}
    stack = [b]
    while stack:
        u = stack.pop()
        for v, w in adj[u]:
            if v not in parent:
                parent[v] = (u, w)
                stack.append(v)
    # walk from a towards b; keep the last minimum, i.e. the one nearest b
    best = None
    u = a
    while u != b:
        nxt, w = parent[u]
        if best is None or w <= best[2]:
            best = (u, nxt, w)
        u = nxt
    cu, cv, w = best
    comp = {cu}
    stack = [cu]
    while stack:
        x = stack.pop()
        for y, _ in adj[x]:
            if y not in comp and not (x == cu and y == cv):
                comp.add(y)
                stack.append(y)
    side = frozenset(v for v, r in t.f.items() if r in comp)
    return w, Cut(side, w)


def tree_matrix(t: GhTree) -> tuple[list[int], np.ndarray]:
    """All-pairs values among terminals; the diagonal holds -1."""
    U = sorted(t.terminals)
    pos = {u: i for i, u in enumerate(U)}
    adj = _adjacency(t)
    out = np.full((len(U), len(U)), -1, dtype=np.int64)
    for a in U:
        best = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                if v not in best:
                    best[v] = w if best[u] is None else min(best[u], w)
                    stack.append(v)
        for v, w in best.items():
            if v != a:
                out[pos[a], pos[v]] = w
    return U, out


# ---------------------------------------------------------------- formats

def format_tree(t: GhTree) -> str:
    lines = [f"t {len(t.terminals)}"]
    lines += [f"T {a} {b} {w}" for a, b, w in t.edges]
    if not t.is_plain:
        lines += [f"F {v} {r}" for v, r in t.f.items()]
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> GhTree:
    size = None
    edges, f = [], {}
    for no, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            tag, nums = parts[0], [int(x) for x in parts[1:]]
        except ValueError:
            raise GraphError(f"line {no}: non-integer field") from None
        if tag == "t" and len(nums) == 1 and size is None:
            size = nums[0]
        elif tag == "T" and len(nums) == 3 and size is not None:
            edges.append(tuple(nums))
        elif tag == "F" and len(nums) == 2 and size is not None:
            if nums[0] in f:
                raise GraphError(f"line {no}: vertex {nums[0]} mapped twice")
            f[nums[0]] = nums[1]
        else:
            raise GraphError(f"line {no}: malformed tree line {raw.strip()!r}")
    if size is None:
        raise GraphError("missing 't' header")
    if f:
        terminals = set(f.values())
    else:
        terminals = set(range(size))
        f = {v: v for v in terminals}
    if len(terminals) != size:
        raise GraphError(f"header says {size} terminals, found {len(terminals)}")
    for a, b, _ in edges:
        if a not in terminals or b not in terminals:
            raise GraphError(f"tree edge ({a}, {b}) leaves the terminal set")
    return GhTree.make(terminals, edges, f)


def tree_to_json(t: GhTree) -> dict:
    return {
        "schema": SCHEMA,
        "terminals": sorted(t.terminals),
        "edges": [{"a": a, "b": b, "w": w} for a, b, w in t.edges],
        "f": {str(v): r for v, r in t.f.items()},
    }


def tree_from_json(data: dict | str) -> GhTree:
    if isinstance(data, str):
        data = json.loads(data)
    if data.get("schema") != SCHEMA:
        raise GraphError(f"unsupported tree schema {data.get('schema')!r}")
    edges = [(e["a"], e["b"], e["w"]) for e in data["edges"]]
    f = {int(v): int(r) for v, r in data["f"].items()}
    return GhTree.make(data["terminals"], edges, f)
