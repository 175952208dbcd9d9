"""Graphs, the instance file format, and terminal preprocessing.

Vertices are 1-indexed throughout. A *cycle* is a simple cycle of length at
least three.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from kcycle.errors import (
    CountError,
    DuplicateEdgeError,
    DuplicateTerminalError,
    HeaderError,
    LoopError,
    ParseError,
    RangeError,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``; edges stored as ``(u, v)`` with ``u < v``."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        normalized = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            normalized.add((min(u, v), max(u, v)))
        return cls(n, frozenset(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        """``adjacency[v]`` is the neighbour set of ``v``; index 0 is unused."""
        adj: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class ReducedInstance:
    """Output of :func:`reduce_terminals`.

    Terminals are vertices ``1..k``; terminal ``i`` is adjacent to exactly
    ``k+2i-1`` and ``k+2i``. ``provenance[v]`` describes where reduced vertex
    ``v`` came from (index 0 unused).
    """

    graph: Graph
    k: int
    provenance: tuple[str, ...] = field(compare=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def twins(self, i: int) -> tuple[int, int]:
        return self.k + 2 * i - 1, self.k + 2 * i


# --- instance format ------------------------------------------------------


def parse_instance(text: str) -> tuple[Graph, tuple[int, ...]]:
    """Parse ``p kcycle n m k`` followed by k ``t`` lines and m ``e`` lines."""
    header = None
    terminals: list[int] = []
    edges: list[Edge] = []
    seen_terminals: set[int] = set()
    seen_edges: set[Edge] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if header is None:
            if tag != "p" or len(parts) != 5 or parts[1] != "kcycle":
                raise HeaderError("expected header 'p kcycle <n> <m> <k>'", lineno)
            try:
                n, m, k = (int(x) for x in parts[2:])
            except ValueError:
                raise HeaderError("header counts must be integers", lineno) from None
            if n < 0 or m < 0 or k < 0:
                raise HeaderError("header counts must be non-negative", lineno)
            if k > n:
                raise HeaderError(f"k={k} exceeds n={n}", lineno)
            header = (n, m, k)
            continue

        n, m, k = header
        if tag == "p":
            raise HeaderError("duplicate header", lineno)
        elif tag == "t":
            if len(parts) != 2:
                raise ParseError("expected 't <v>'", lineno)
            if edges:
                raise ParseError("terminal lines must precede edge lines", lineno)
            if len(terminals) == k:
                raise CountError(f"more than k={k} terminal lines", lineno)
            v = _vertex(parts[1], n, lineno)
            if v in seen_terminals:
                raise DuplicateTerminalError(f"terminal {v} listed twice", lineno)
            seen_terminals.add(v)
            terminals.append(v)
        elif tag == "e":
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            if len(edges) == m:
                raise CountError(f"more than m={m} edge lines", lineno)
            u = _vertex(parts[1], n, lineno)
            v = _vertex(parts[2], n, lineno)
            if u == v:
                raise LoopError(f"loop edge at vertex {u}", lineno)
            e = (min(u, v), max(u, v))
            if e in seen_edges:
                raise DuplicateEdgeError(f"edge {u}-{v} listed twice", lineno)
            seen_edges.add(e)
            edges.append(e)
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)

    if header is None:
        raise HeaderError("missing header")
    n, m, k = header
    if len(terminals) != k:
        raise CountError(f"expected {k} terminal lines, found {len(terminals)}")
    if len(edges) != m:
        raise CountError(f"expected {m} edge lines, found {len(edges)}")
    return Graph(n, frozenset(edges)), tuple(terminals)


def _vertex(token: str, n: int, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"vertex {token!r} is not an integer", lineno) from None
    if not 1 <= v <= n:
        raise RangeError(f"vertex {v} outside 1..{n}", lineno)
    return v


def format_instance(g: Graph, terminals: Sequence[int], comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p kcycle {g.n} {g.m} {len(terminals)}")
    lines.extend(f"t {v}" for v in terminals)
    lines.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def read_instance(path) -> tuple[Graph, tuple[int, ...]]:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# --- preprocessing --------------------------------------------------------


def reduce_terminals(g: Graph, terminals: Sequence[int]) -> ReducedInstance:
    """Make every terminal a degree-two vertex in canonical position.

    Edges between terminals are subdivided first (new vertices appended after
    ``n`` in sorted edge order). Each terminal ``v`` is then replaced by two
    non-adjacent twins carrying its neighbourhood, and a fresh terminal
    adjacent to just the twins. Relabelling: terminal ``i`` (in the given
    order) becomes ``i``, its twins ``k+2i-1`` and ``k+2i``, and the remaining
    vertices follow from ``3k+1`` in increasing original order.
    """
    k = len(terminals)
    if k < 2:
        raise ValueError("reduce_terminals needs at least two terminals")
    if len(set(terminals)) != k:
        raise ValueError("terminals must be distinct")
    for v in terminals:
        if not 1 <= v <= g.n:
            raise ValueError(f"terminal {v} outside 1..{g.n}")

    term_index = {v: i for i, v in enumerate(terminals, start=1)}

    # subdivide terminal-terminal edges
    n_sub = g.n
    work_edges: list[Edge] = []
    origin: dict[int, str] = {v: f"vertex {v}" for v in range(1, g.n + 1)}
    for u, v in g.sorted_edges():
        if u in term_index and v in term_index:
            n_sub += 1
            origin[n_sub] = f"subdivision of edge {u}-{v}"
            work_edges.extend([(u, n_sub), (v, n_sub)])
        else:
            work_edges.append((u, v))

    label: dict[int, int] = {}
    next_label = 3 * k + 1
    for v in range(1, n_sub + 1):
        if v not in term_index:
            label[v] = next_label
            next_label += 1
    n_new = next_label - 1

    provenance = [""] * (n_new + 1)
    for v, lab in label.items():
        provenance[lab] = origin[v]
    new_edges: set[Edge] = set()
    for v, i in term_index.items():
        a, b = k + 2 * i - 1, k + 2 * i
        provenance[i] = f"terminal {v}"
        provenance[a] = f"twin' of terminal {v}"
        provenance[b] = f"twin'' of terminal {v}"
        new_edges.add((i, a))
        new_edges.add((i, b))

    for u, v in work_edges:
        if u in term_index:
            u, v = v, u
        if v in term_index:
            i = term_index[v]
            w = label[u]
            new_edges.add((k + 2 * i - 1, w))
            new_edges.add((k + 2 * i, w))
        else:
            a, b = label[u], label[v]
            new_edges.add((min(a, b), max(a, b)))

    return ReducedInstance(Graph(n_new, frozenset(new_edges)), k, tuple(provenance))


def check_reduced(r: ReducedInstance) -> None:
    """Raise AssertionError unless ``r`` satisfies the reduced-form invariants."""
    g, k = r.graph, r.k
    assert g.n >= 3 * k, "too few vertices"
    seen: set[int] = set()
    for i in range(1, k + 1):
        nbrs = g.neighbors(i)
        assert nbrs == frozenset(r.twins(i)), f"terminal {i} has neighbours {sorted(nbrs)}"
        assert not nbrs & seen, f"terminal {i} shares a neighbour"
        seen |= nbrs
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            assert not g.has_edge(i, j), "terminals not independent"


# --- polynomial special cases (k <= 1) ---------------------------------------


def has_any_cycle(g: Graph) -> bool:
    """A simple graph has a cycle iff it has more edges than a spanning forest."""
    return g.m > g.n - _component_count(g)


def on_some_cycle(g: Graph, v: int) -> bool:
    """True iff some incident edge of ``v`` is not a bridge."""
    for u in g.neighbors(v):
        if _reachable_avoiding_edge(g, u, v):
            return True
    return False


def _component_count(g: Graph) -> int:
    seen = [False] * (g.n + 1)
    count = 0
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return count


def _reachable_avoiding_edge(g: Graph, src: int, dst: int) -> bool:
    seen = {src}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if x == src and y == dst:
                continue
            if y == dst:
                return True
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False
