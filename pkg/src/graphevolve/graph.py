"""Immutable undirected simple graphs and the edge-edit operation.

Vertices are dense 0-indexed integers. Graphs are value objects: every
mutation-like operation returns a new graph, so instances can be shared
freely across threads and processes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

Pair = tuple[int, int]


def normalize_pair(u: int, v: int) -> Pair:
    """Order an undirected vertex pair as (low, high); self-pairs are invalid."""
    if u == v:
        raise ValueError(f"self-pair ({u}, {v}) is not a valid undirected edge")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EdgeEdit:
    """A batch of edge additions and deletions applied atomically."""

    additions: frozenset[Pair] = frozenset()
    deletions: frozenset[Pair] = frozenset()

    def __post_init__(self):
        for pair in self.additions | self.deletions:
            u, v = pair
            if normalize_pair(u, v) != pair:
                raise ValueError(f"pair {pair} is not in normalized (low, high) form")
        if self.additions & self.deletions:
            raise ValueError("additions and deletions overlap")

    @classmethod
    def from_pairs(cls, additions: Iterable[Pair] = (), deletions: Iterable[Pair] = ()) -> "EdgeEdit":
        return cls(
            additions=frozenset(normalize_pair(*p) for p in additions),
            deletions=frozenset(normalize_pair(*p) for p in deletions),
        )

    def inverse(self) -> "EdgeEdit":
        return EdgeEdit(additions=self.deletions, deletions=self.additions)

    @property
    def size(self) -> int:
        return len(self.additions) + len(self.deletions)


@dataclass(frozen=True)
class Graph:
    """Undirected, unweighted simple graph on vertices 0..vertex_count-1.

    Edges are stored once as normalized (low, high) pairs. Isolated
    vertices are legal; the vertex set never changes under edits.
    """

    vertex_count: int
    edges: frozenset[Pair] = frozenset()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        for pair in self.edges:
            u, v = pair
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {pair} references a vertex outside 0..{self.vertex_count - 1}")
            if normalize_pair(u, v) != pair:
                raise ValueError(f"edge {pair} is not in normalized (low, high) form")

    @classmethod
    def from_edges(cls, vertex_count: int, pairs: Iterable[Pair]) -> "Graph":
        return cls(vertex_count, frozenset(normalize_pair(*p) for p in pairs))

    @cached_property
    def _neighbors(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.vertex_count):
            raise ValueError(f"vertex {v} outside 0..{self.vertex_count - 1}")

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return (min(u, v), max(u, v)) in self.edges

    def common_neighbors(self, i: int, j: int) -> frozenset[int]:
        if i == j:
            raise ValueError("common_neighbors requires two distinct vertices")
        return self.neighbors(i) & self.neighbors(j)

    def two_hop_linked(self, i: int, j: int) -> bool:
        """True iff some length-2 path joins i and j (adjacent or not)."""
        return bool(self.common_neighbors(i, j))

    def component_count(self) -> int:
        seen = [False] * self.vertex_count
        count = 0
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            count += 1
            seen[start] = True
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in self._neighbors[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
        return count

    def apply_edit(self, edit: EdgeEdit) -> "Graph":
        """Return a new graph with edges (E | additions) - deletions.

        The edit must be consistent with this graph: deletions must exist,
        additions must not; a conflicting edit raises rather than being
        silently dropped.
        """
        for pair in edit.additions:
            u, v = pair
            self._check_vertex(u)
            self._check_vertex(v)
            if pair in self.edges:
                raise ValueError(f"addition {pair} already present")
        missing = edit.deletions - self.edges
        if missing:
            raise ValueError(f"deletions not present in graph: {sorted(missing)}")
        return Graph(self.vertex_count, (self.edges | edit.additions) - edit.deletions)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.vertex_count, self.vertex_count))
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def degree_sequence(self) -> list[int]:
        return [len(s) for s in self._neighbors]

    def __repr__(self) -> str:  # compact: edge sets can be large
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"
