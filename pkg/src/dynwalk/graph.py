"""Static graphs and their walk Hamiltonians.

A graph is a vertex count plus a set of undirected, loop-free edges. The
Hamiltonian is the adjacency matrix, with one extra rule: a vertex that has no
neighbours carries a self-loop (``A[v, v] = 1``), so an isolated vertex picks
up the phase ``exp(-i t)`` while the walk runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateEdgeError, GraphError, SelfLoopError, VertexRangeError

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise GraphError(f"vertex_count must be >= 1, got {self.vertex_count}")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise VertexRangeError(
                    f"edge ({u}, {v}) has an endpoint outside [0, {self.vertex_count})"
                )
            if u == v:
                raise SelfLoopError(f"explicit self-loop ({u}, {u}) is not allowed")
            if u > v:
                raise GraphError("edges must be stored as (min, max); use build_graph")
            if (u, v) in seen:
                raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise GraphError("edges must be sorted; use build_graph")

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        adj = self.neighbours()
        seen = [False] * self.vertex_count
        out = []
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [[u, v] for u, v in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return build_graph(int(data["vertices"]), [tuple(e) for e in data.get("edges", [])])


def build_graph(vertex_count: int, edges: Iterable[Sequence[int]] = ()) -> Graph:
    """Validate ``edges`` and return a graph with canonical (sorted, min-max) edges.

    Out-of-range endpoints, explicit self-loops and repeated pairs (in either
    orientation) each raise their own ``GraphError`` subclass.
    """
    if vertex_count < 1:
        raise GraphError(f"vertex_count must be >= 1, got {vertex_count}")
    normalized: list[Edge] = []
    seen: set[Edge] = set()
    for edge in edges:
        u, v = (int(x) for x in edge)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise VertexRangeError(f"edge ({u}, {v}) has an endpoint outside [0, {vertex_count})")
        if u == v:
            raise SelfLoopError(f"explicit self-loop ({u}, {u}) is not allowed")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        seen.add(key)
        normalized.append(key)
    return Graph(vertex_count, tuple(sorted(normalized)))


def empty_graph(vertex_count: int) -> Graph:
    """All vertices isolated (a disjoint union of singletons)."""
    return Graph(vertex_count)


def hamiltonian(g: Graph) -> np.ndarray:
    """Adjacency matrix with the isolated-vertex self-loop convention (real, 0/1)."""
    a = np.zeros((g.vertex_count, g.vertex_count))
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1.0
    isolated = ~a.any(axis=1)
    a[isolated, isolated] = 1.0
    return a


def disjoint_union(parts: Sequence[Graph]) -> Graph:
    if not parts:
        raise GraphError("disjoint_union needs at least one graph")
    offset, edges = 0, []
    for g in parts:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.vertex_count
    return build_graph(offset, edges)


def cycle4_edges(a: int, b: int, c: int, d: int) -> list[Edge]:
    """C4 on four labels using the edge pattern (0,1),(0,2),(1,3),(2,3).

    ``a``/``d`` and ``b``/``c`` end up antipodal.
    """
    return [(a, b), (a, c), (b, d), (c, d)]


def star_edges(center: int, leaves: Sequence[int]) -> list[Edge]:
    return [(center, leaf) for leaf in leaves]


# Small named graphs used throughout the docs and tests.
K1 = build_graph(1)
K2 = build_graph(2, [(0, 1)])
C4 = build_graph(4, cycle4_edges(0, 1, 2, 3))
STAR5 = build_graph(5, star_edges(0, [1, 2, 3, 4]))
