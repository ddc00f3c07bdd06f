"""Instrumentation counters shared by the flow-based layers.

Counters are opt-in: wrap a computation in ``with track() as st:`` and
every max-flow call made inside it is tallied into ``st``. Nested
``track()`` blocks each receive every event.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator


@dataclass
class Stats:
    flow_calls: int = 0          # logical max-flow invocations
    flow_solved: int = 0         # invocations not answered from cache
    flow_vertices: int = 0       # cumulative vertices over logical calls
    flow_edges: int = 0          # cumulative edges over logical calls
    events: dict[str, int] = field(default_factory=dict)
    maxima: dict[str, int] = field(default_factory=dict)
    log: dict[str, list] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "flow_calls": self.flow_calls,
            "flow_solved": self.flow_solved,
            "flow_vertices": self.flow_vertices,
            "flow_edges": self.flow_edges,
        }
        out.update(self.events)
        out.update({f"max_{k}": v for k, v in self.maxima.items()})
        return out


_active: list[Stats] = []


@contextmanager
def track() -> Iterator[Stats]:
    st = Stats()
    _active.append(st)
    try:
        yield st
    finally:
        _active.remove(st)


def record_flow(n: int, m: int, solved: bool) -> None:
    for st in _active:
        st.flow_calls += 1
        st.flow_vertices += n
        st.flow_edges += m
        if solved:
            st.flow_solved += 1


def bump(name: str, k: int = 1) -> None:
    for st in _active:
        st.events[name] = st.events.get(name, 0) + k


def high_water(name: str, value: int) -> None:
    for st in _active:
        if value > st.maxima.get(name, -1):
            st.maxima[name] = value


def append(name: str, item) -> None:
    for st in _active:
        st.log.setdefault(name, []).append(item)


def tracking() -> bool:
    return bool(_active)
