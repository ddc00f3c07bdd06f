"""Minimum isolating cuts with O(log h) rounds of max-flow.

Given disjoint terminal sets ``U_1..U_h``, find for every ``i`` the
vertex-minimal ``(U_i, union of the others)``-mincut. Each of the
``ceil(log2 h)`` phases splits the set indices by one bit and computes a
single mincut between the two unions; intersecting the sides containing
``U_i`` gives a region that must contain its minimal isolating cut. A final
max-flow per set inside its region (everything else contracted into the
sink) recovers the cut itself. Regions are disjoint, so the final flows
touch O(m) edges in total.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import stats
from .graph import Cut, Graph, GraphError
from .maxflow import flow_between_sets, region_flow


def isolating_cuts(g: Graph, sets: Sequence[Iterable[int]]) -> list[Cut]:
    """Minimal minimum isolating cut for each terminal set, in input order."""
    groups = [frozenset(int(v) for v in s) for s in sets]
    h = len(groups)
    if h < 2:
        raise GraphError("isolating cuts need at least two terminal sets")
    owner = np.full(g.n, -1, dtype=np.int64)
    for i, grp in enumerate(groups):
        if not grp:
            raise GraphError(f"terminal set {i} is empty")
        for v in grp:
            if not 0 <= v < g.n:
                raise GraphError(f"terminal {v} out of range")
            if owner[v] != -1:
                raise GraphError(f"terminal sets overlap at vertex {v}")
            owner[v] = i

    # label[v] = bit pattern of the sides v fell on across phases
    label = np.zeros(g.n, dtype=np.int64)
    for b in range((h - 1).bit_length()):
        a_side = frozenset().union(*(grp for i, grp in enumerate(groups) if not (i >> b) & 1))
        b_side = frozenset().union(*(grp for i, grp in enumerate(groups) if (i >> b) & 1))
        cut = flow_between_sets(g, a_side, b_side)
        in_a = g.mask(cut.side)
        label[~in_a] |= 1 << b
        stats.bump("isolating_phase_flows")

    out = []
    for i, grp in enumerate(groups):
        region = np.flatnonzero(label == i)
        out.append(region_flow(g, grp, region))
    return out
