"""Graph text formats.

DIMACS-like: ``c`` comment lines, a ``p ghct <n> <m>`` header, then ``e <u> <v> <w>``
lines with 1-based ids. Without a header, each line is a 0-based ``u v w`` triple
and n is one more than the largest id seen.
"""

from __future__ import annotations

from pathlib import Path

from .graph import W_MAX, Graph, GraphError, build_graph


class ParseError(GraphError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _ints(fields: list[str], line: int) -> list[int]:
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise ParseError(line, f"expected integers, got {' '.join(fields)!r}") from None


def parse_graph(text: str, *, w_max: int = W_MAX) -> Graph:
    lines = [(no, raw.split()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, f) for no, f in lines if f and f[0] != "c"]
    if lines and lines[0][1][0] == "p":
        return _parse_dimacs(lines, w_max)
    edges = []
    for no, f in lines:
        if len(f) != 3:
            raise ParseError(no, "expected 'u v w'")
        u, v, w = _ints(f, no)
        if u < 0 or v < 0:
            raise ParseError(no, "negative vertex id")
        edges.append((no, u, v, w))
    n = 1 + max((max(u, v) for _, u, v, _ in edges), default=-1)
    return _build(n, edges, w_max)


def _parse_dimacs(lines, w_max: int) -> Graph:
    no, head = lines[0]
    if len(head) != 4 or head[1] != "ghct":
        raise ParseError(no, "header must read 'p ghct <n> <m>'")
    n, m = _ints(head[2:], no)
    if n < 0 or m < 0:
        raise ParseError(no, "negative size in header")
    edges = []
    for no, f in lines[1:]:
        if f[0] == "p":
            raise ParseError(no, "duplicate header")
        if f[0] != "e" or len(f) != 4:
            raise ParseError(no, "expected 'e <u> <v> <w>'")
        u, v, w = _ints(f[1:], no)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(no, f"vertex id out of range 1..{n}")
        edges.append((no, u - 1, v - 1, w))
    if len(edges) != m:
        raise GraphError(f"header declares {m} edges, found {len(edges)}")
    return _build(n, edges, w_max)


def _build(n: int, edges, w_max: int) -> Graph:
    for no, u, v, w in edges:
        if w < 1 or w > w_max:
            raise ParseError(no, f"weight {w} outside [1, {w_max}]")
    return build_graph(n, [(u, v, w) for _, u, v, w in edges], w_max=w_max)


def read_graph(path: str | Path, *, w_max: int = W_MAX) -> Graph:
    return parse_graph(Path(path).read_text(), w_max=w_max)


def format_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p ghct {g.n} {g.m}")
    lines += [f"e {u + 1} {v + 1} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"
