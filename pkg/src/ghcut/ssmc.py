"""Single-source terminal mincuts driven by guide trees.

``ssmc_guided`` is the recursive solver: every value it reports is the
value of a real (s, t)-cut, and when some (s, t)-mincut crosses at most k
edges of the guide tree (fake tree nodes may pick either side) the value
is exact with high probability. ``sstm_promise`` feeds it sampled guide
trees; ``sstm_no_promise`` buckets terminals by approximate connectivity so
every bucket satisfies the promise.

Tree nodes with negative ids are fake; non-negative ids are vertices of
the current graph. Contracted vertices created by the recursion are
ordinary vertices of the contracted graph and therefore real tree nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from . import stats
from .graph import Graph, GraphError, contract
from .isolating import isolating_cuts
from .maxflow import max_flow
from .oracles import CutThresholdOracle, SsmcApproxOracle, approx_single_source_mincuts, \
    max_terminal_mincut
from .packing import GuideTree, sample_guide_trees

BUCKET_EPS = 0.01


@dataclass(frozen=True)
class SsmcConfig:
    base_case_size: int = 10
    sampling_trials_factor: float = 3.0  # step-5 trials: ceil(factor * ln n)
    k: int = 4
    seed: int = 0
    guide_trials_factor: float = 3.0     # guide trees per promise call: ceil(factor * ln n)
    guide_trials: int | None = None      # explicit count overrides the factor
    pack_eps: float = 0.1
    debug: bool = False

    def __post_init__(self) -> None:
        if self.base_case_size < 3:
            raise ValueError("base_case_size must be at least 3")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.sampling_trials_factor <= 0 or self.guide_trials_factor <= 0:
            raise ValueError("trial factors must be positive")


# Lighter constants for the end-to-end tree construction, which validates
# its output and retries on failure instead of paying for proof-level constants.
# A larger base case only adds exact flows, so it trades recursion for accuracy.
PIPELINE_CONFIG = SsmcConfig(base_case_size=24, sampling_trials_factor=0.5,
                             guide_trials_factor=1.0, pack_eps=0.4)


def derive_seed(seed: int, *path: int) -> int:
    """Child seed depending only on the parent seed and the path, not on call order."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


class Estimates:
    """Upper estimates lambda~(t), starting at +inf and only ever lowered."""

    def __init__(self, targets: Iterable[int]):
        self.values: dict[int, float | int] = {int(t): math.inf for t in targets}

    def update(self, t: int, x: float | int) -> None:
        if x < self.values[t]:
            self.values[t] = x

    def __getitem__(self, t: int) -> float | int:
        return self.values[t]

    def __contains__(self, t: int) -> bool:
        return t in self.values

    def __len__(self) -> int:
        return len(self.values)

    def as_dict(self) -> dict[int, float | int]:
        return dict(self.values)


def centroid(T: GuideTree) -> int:
    """Deepest node (rooted at the source) whose subtree holds at least |R(T)|/2 real nodes."""
    root = T.source
    parent = {root: root}
    order = [root]
    for u in order:
        for v in T.adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
    depth = {root: 0}
    for u in order[1:]:
        depth[u] = depth[parent[u]] + 1
    count = {u: (1 if u >= 0 else 0) for u in order}
    for u in reversed(order[1:]):
        count[parent[u]] += count[u]
    r = count[root]
    best = root
    for u in order:
        if 2 * count[u] >= r and depth[u] > depth[best]:
            best = u
    return best


def _split_at(T: GuideTree, c: int) -> list[tuple[int, list[int]]]:
    """Child subtrees of ``c`` as (child root, node list)."""
    out = []
    for u in T.adj[c]:
        seen = {c, u}
        nodes = [u]
        for x in nodes:
            for y in T.adj[x]:
                if y not in seen:
                    seen.add(y)
                    nodes.append(y)
        out.append((u, nodes))
    return out


def _subtree(T: GuideTree, keep: set[int], source: int) -> GuideTree:
    nodes = tuple(v for v in T.nodes if v in keep)
    edges = tuple((a, b) for a, b in T.edges if a in keep and b in keep)
    return GuideTree(nodes, edges, source)


def ssmc_guided(g: Graph, T: GuideTree, s: int | None = None, k: int | None = None,
                cfg: SsmcConfig | None = None) -> Estimates:
    """Upper estimates of lambda(s, t) for every real tree node t != s."""
    cfg = cfg or SsmcConfig()
    s = T.source if s is None else s
    k = cfg.k if k is None else k
    if s not in T.real:
        raise GraphError(f"source {s} is not a real node of the guide tree")
    if k < 1:
        raise ValueError("k must be at least 1")
    if max(T.real) >= g.n:
        raise GraphError("guide tree mentions a vertex outside the graph")
    if s != T.source:
        T = GuideTree(T.nodes, T.edges, s)
    contracted: frozenset[int] = frozenset()
    return _ssmc(g, T, k, cfg, np.random.SeedSequence(cfg.seed), contracted, 0, {})


def _ssmc(g: Graph, T: GuideTree, k: int, cfg: SsmcConfig, seq: np.random.SeedSequence,
          contracted: frozenset[int], depth: int, memo: dict) -> Estimates:
    # Identical (graph, tree, k) subproblems recur through steps 5 and 6; an
    # earlier answer is as good as a fresh draw of the same randomized call.
    key = (g, T, k)
    est = memo.get(key)
    if est is not None:
        stats.bump("ssmc_memo_hits")
        return est
    est = memo[key] = _solve(g, T, k, cfg, seq, contracted, depth, memo)
    return est


def _solve(g: Graph, T: GuideTree, k: int, cfg: SsmcConfig, seq: np.random.SeedSequence,
           contracted: frozenset[int], depth: int, memo: dict) -> Estimates:
    s = T.source
    R = T.real
    est = Estimates(R - {s})
    stats.bump("ssmc_calls")
    stats.high_water("ssmc_step4_depth", depth)

    # step 1: base case
    if len(R) < cfg.base_case_size:
        for t in sorted(R - {s}):
            est.update(t, max_flow(g, s, t).value)
        return est

    # step 2: centroid
    c = centroid(T)
    if c >= 0 and c != s:
        est.update(c, max_flow(g, s, c).value)

    # step 3: isolating cuts on the real sets of the child subtrees
    subs = []
    for u, nodes in _split_at(T, c):
        real = frozenset(v for v in nodes if v >= 0)
        if real:
            subs.append((u, nodes, real))
    sets = [real for _, _, real in subs] + ([frozenset([c])] if c >= 0 else [])
    cuts = isolating_cuts(g, sets)[:len(subs)]

    trials = math.ceil(cfg.sampling_trials_factor * math.log(g.n)) if k > 1 else 0
    children = seq.spawn(len(subs) + 2 * trials + 1)

    # step 4: recurse on each isolating cut with its complement contracted
    inner_edges = _free_edges(g, contracted)
    acct = {"n": g.n, "c_real": c >= 0, "depth": depth, "sum_ni_minus_1": 0,
            "free_edges": inner_edges, "sum_free_edges": 0}
    for i, ((u, nodes, real), cut) in enumerate(zip(subs, cuts)):
        outside = [v for v in range(g.n) if v not in cut.side]
        h, cmap = contract(g, [outside])
        x = cmap.image[outside[0]]
        img = cmap.image
        s_in = s in real
        node_set = set(nodes)
        new_nodes = tuple(img[v] if v >= 0 else v for v in nodes) + (x,)
        new_edges = tuple((img[a] if a >= 0 else a, img[b] if b >= 0 else b)
                          for a, b in T.edges if a in node_set and b in node_set)
        new_edges += ((x, img[u] if u >= 0 else u),)
        sub_t = GuideTree(new_nodes, new_edges, img[s] if s_in else x)
        sub_contracted = frozenset([x]) | frozenset(img[v] for v in contracted if v in cut.side)
        acct["sum_ni_minus_1"] += h.n - 1
        acct["sum_free_edges"] += _free_edges(h, sub_contracted)
        sub = _ssmc(h, sub_t, k, cfg, children[i], sub_contracted, depth + 1, memo)
        for t in real - {s}:
            est.update(t, sub[img[t]])
        if s_in:
            via = sub[x]
            for t in R - real:
                est.update(t, via)
    stats.append("ssmc_step4", acct)

    if k == 1:
        return est

    # step 5: half-sample the subtrees, always keeping the one holding s
    base = len(subs)
    tried: set[frozenset[int]] = set()
    for j in range(trials):
        rng = np.random.default_rng(children[base + 2 * j])
        keep = {c}
        for u, nodes, real in subs:
            if s in real or rng.random() < 0.5:
                keep.update(nodes)
        key = frozenset(keep)
        if key in tried:
            # same subproblem as an earlier trial; rerunning only reshuffles its inner sampling
            stats.bump("ssmc_step5_repeats")
            continue
        tried.add(key)
        t5 = _subtree(T, keep, s)
        if len(t5.real) < 2:
            continue
        sub = _ssmc(g, t5, k - 1, cfg, children[base + 2 * j + 1], contracted, depth, memo)
        for t in t5.real - {s}:
            est.update(t, sub[t])

    # step 6: jump the source to a farthest terminal outside its subtree
    if s != c:
        u_s, nodes_s, real_s = next(x for x in subs if s in x[2])
        cand = R - real_s
        lam_max, argmax = max_terminal_mincut(CutThresholdOracle(g), cand, s)
        for t in argmax:
            est.update(t, lam_max)
        s2 = min(argmax)
        if cfg.debug:
            _check_relabel(g, s, s2, lam_max, cand)
        drop = set(nodes_s)
        t6 = _subtree(T, {v for v in T.nodes if v not in drop}, s2)
        if len(t6.real) >= 2:
            sub = _ssmc(g, t6, k - 1, cfg, children[-1], contracted, depth, memo)
            for t in t6.real - {s2}:
                est.update(t, sub[t])
    return est


def _free_edges(g: Graph, contracted: frozenset[int]) -> int:
    if not contracted:
        return g.m
    hit = g.mask(contracted)
    return int((~hit[g.us] & ~hit[g.vs]).sum())


def _check_relabel(g: Graph, s: int, s2: int, lam_max: int, cand: Iterable[int]) -> None:
    for t in cand:
        if t == s2:
            continue
        lam = max_flow(g, s, t).value
        if lam < lam_max and max_flow(g, s2, t).value != lam:
            raise AssertionError(f"relabelled source {s2} disagrees with {s} on {t}")


def sstm_promise(g: Graph, U: Iterable[int], s: int, cfg: SsmcConfig | None = None) -> dict[int, int]:
    """lambda(s, t) for t in U - {s}, assuming all values lie within [lambda(U), 1.1 lambda(U)].

    Terminals below ``cfg.base_case_size`` would hit the solver's base case
    on any guide tree, so they are answered with direct flows and no packing.
    """
    cfg = cfg or SsmcConfig()
    U = set(int(u) for u in U)
    if len(U) < 2:
        raise GraphError("need at least two terminals")
    if s not in U:
        raise GraphError("source must be a terminal")
    comp = g.components
    out = {t: 0 for t in U if comp[t] != comp[s]}
    conn = sorted(t for t in U if comp[t] == comp[s])
    if len(conn) < 2:
        return out
    if cfg.debug:
        _check_promise(g, conn, s)
    if len(conn) < cfg.base_case_size:
        stats.bump("promise_direct")
        for t in conn:
            if t != s:
                out[t] = max_flow(g, s, t).value
        return out

    stats.bump("promise_guided")
    trials = cfg.guide_trials
    if trials is None:
        trials = math.ceil(cfg.guide_trials_factor * math.log(g.n))
    trees = sample_guide_trees(g, conn, s, trials, derive_seed(cfg.seed, 0), eps=cfg.pack_eps)
    distinct: dict[tuple, GuideTree] = {}
    for t in trees:
        distinct.setdefault(t.edges, t)
    terms = frozenset(conn)
    distinct = {key: steiner_nodes_as_fake(t, terms) for key, t in distinct.items()}
    best = {t: math.inf for t in conn if t != s}
    for j, tree in enumerate(distinct.values()):
        est = ssmc_guided(g, tree, s, cfg.k, replace(cfg, seed=derive_seed(cfg.seed, 1, j)))
        for t in best:
            best[t] = min(best[t], est[t])
    stats.bump("guide_trees_run", len(distinct))
    out.update(best)
    return out


def steiner_nodes_as_fake(T: GuideTree, terminals: frozenset[int]) -> GuideTree:
    """Relabel non-terminal tree nodes as fake nodes.

    Fake nodes may join either side of a cut, so any cut that k-respects
    the original tree still k-respects the relabelled one, while the
    solver no longer spends recursion on vertices nobody asked about.
    """
    fake = {v: -(i + 1) for i, v in enumerate(sorted(T.real - terminals))}
    if not fake:
        return T
    nodes = tuple(fake.get(v, v) for v in T.nodes)
    edges = tuple((fake.get(a, a), fake.get(b, b)) for a, b in T.edges)
    return GuideTree(nodes, edges, T.source)


def _check_promise(g: Graph, conn: list[int], s: int) -> None:
    vals = {t: max_flow(g, s, t).value for t in conn if t != s}
    lam_u = min(max_flow(g, a, b).value for i, a in enumerate(conn) for b in conn[i + 1:])
    for t, v in vals.items():
        if not (lam_u <= v <= 1.1 * lam_u):
            raise AssertionError(f"promise violated at terminal {t}: {v} vs lambda(U)={lam_u}")


def bucket_index(value: float, eps: float = BUCKET_EPS) -> int:
    """The i with (1+eps)^i <= value < (1+eps)^(i+1); value must be positive."""
    base = 1 + eps
    i = math.floor(math.log(value) / math.log(base))
    while base ** (i + 1) <= value:
        i += 1
    while base ** i > value:
        i -= 1
    return i


def sstm_no_promise(g: Graph, U: Iterable[int], s: int, cfg: SsmcConfig | None = None,
                    approx: SsmcApproxOracle | None = None) -> dict[int, int]:
    """lambda(s, t) for every t in U - {s}, without any promise on the values."""
    cfg = cfg or SsmcConfig()
    U = set(int(u) for u in U)
    if s not in U:
        raise GraphError("source must be a terminal")
    approx = approx or SsmcApproxOracle(g)
    lam = approx_single_source_mincuts(approx, s, U - {s})
    out: dict[int, int] = {}
    buckets: dict[int, list[int]] = {}
    for t, v in lam.items():
        if v <= 0:
            out[t] = 0  # a (1+eps)-estimate of zero is exact
        else:
            buckets.setdefault(bucket_index(v), []).append(t)
    stats.bump("no_promise_buckets", len(buckets))
    for i, ts in sorted(buckets.items()):
        res = sstm_promise(g, [s, *ts], s, replace(cfg, seed=derive_seed(cfg.seed, 2, i)))
        out.update(res)
    return out
