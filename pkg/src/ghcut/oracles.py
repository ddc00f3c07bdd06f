"""Pluggable cut oracles: cut-threshold, max-finder, Steiner mincut, approximate SSMC.

The default strategies are exact and naive: every query is answered by
per-vertex max-flows, memoised per source. A faster plugin only has to
honour the same contracts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .graph import Graph, GraphError
from .maxflow import max_flow

# plugin(g, s, lambda_bar, candidates) -> set of candidates with lambda(s, v) <= lambda_bar
ThresholdPlugin = Callable[[Graph, int, int, frozenset[int]], set[int]]
# plugin(g, s, targets) -> {v: estimate}
ApproxPlugin = Callable[[Graph, int, frozenset[int]], dict[int, int]]


@dataclass
class CutThresholdOracle:
    g: Graph
    strategy: str = "naive"
    plugin: ThresholdPlugin | None = None
    _memo: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.strategy not in ("naive", "plugin"):
            raise ValueError(f"unknown cut-threshold strategy {self.strategy!r}")
        if self.strategy == "plugin" and self.plugin is None:
            raise ValueError("plugin strategy needs a plugin callable")

    def connectivity(self, s: int, v: int) -> int:
        key = (s, v)
        if key not in self._memo:
            self._memo[key] = max_flow(self.g, s, v).value
        return self._memo[key]


def cut_threshold(o: CutThresholdOracle, s: int, lambda_bar: int,
                  candidates: Iterable[int] | None = None) -> set[int]:
    """All ``v != s`` (among ``candidates``, default all of V) with lambda(s, v) <= lambda_bar."""
    g = o.g
    if not 0 <= s < g.n:
        raise GraphError(f"source {s} out of range")
    pool = frozenset(range(g.n) if candidates is None else candidates) - {s}
    if o.strategy == "plugin":
        return set(o.plugin(g, s, lambda_bar, pool))
    return {v for v in pool if o.connectivity(s, v) <= lambda_bar}


def max_terminal_mincut(o: CutThresholdOracle, U: Iterable[int], s: int) -> tuple[int, set[int]]:
    """``(max_{t in U} lambda(s, t), argmax set)`` by binary search over thresholds."""
    U = frozenset(U)
    if not U:
        raise GraphError("terminal set must be non-empty")
    if s in U:
        raise GraphError("source must not be a terminal")
    lo, hi = 0, o.g.m * o.g.max_weight  # smallest lambda_bar whose threshold set covers U
    while lo < hi:
        mid = (lo + hi) // 2
        if cut_threshold(o, s, mid, U) >= U:
            hi = mid
        else:
            lo = mid + 1
    lam_max = lo
    if lam_max == 0:
        return 0, set(U)
    below = cut_threshold(o, s, lam_max - 1, U)
    return lam_max, set(U - below)


def steiner_mincut(g: Graph, U: Iterable[int]) -> int:
    """lambda(U): the minimum pairwise mincut among terminals.

    Any fixed terminal is separated from some partner by a cut realising
    lambda(U), so scanning its flows to the others suffices.
    """
    terms = sorted(set(U))
    if len(terms) < 2:
        raise GraphError("Steiner mincut needs at least two terminals")
    s0 = terms[0]
    return min(max_flow(g, s0, t).value for t in terms[1:])


@dataclass
class SsmcApproxOracle:
    g: Graph
    strategy: str = "exact"
    eps: float = 0.0
    plugin: ApproxPlugin | None = None

    def __post_init__(self) -> None:
        if self.strategy not in ("exact", "plugin"):
            raise ValueError(f"unknown approximation strategy {self.strategy!r}")
        if self.strategy == "plugin" and self.plugin is None:
            raise ValueError("plugin strategy needs a plugin callable")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")


def approx_single_source_mincuts(o: SsmcApproxOracle, s: int,
                                 targets: Iterable[int] | None = None) -> dict[int, int]:
    """Per-vertex estimates within a factor (1 + eps) of lambda(s, v).

    ``targets`` restricts the output (default: every vertex other than s).
    """
    g = o.g
    if not 0 <= s < g.n:
        raise GraphError(f"source {s} out of range")
    pool = frozenset(range(g.n) if targets is None else targets) - {s}
    if o.strategy == "plugin":
        return dict(o.plugin(g, s, pool))
    return {v: max_flow(g, s, v).value for v in sorted(pool)}


def within_sandwich(estimates: Mapping[int, float], exact: Mapping[int, int], eps: float) -> bool:
    """True when every estimate lies in [lambda / (1 + eps), (1 + eps) * lambda]."""
    for v, lam in exact.items():
        est = estimates[v]
        if not (lam / (1 + eps) - 1e-9 <= est <= (1 + eps) * lam + 1e-9):
            return False
    return True
