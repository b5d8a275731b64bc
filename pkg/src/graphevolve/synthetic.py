"""Synthetic two-class graph datasets for demos, smoke tests, and CI."""

from __future__ import annotations

import numpy as np

from .datasets import GraphDataset
from .graph import Graph


def random_tree_graph(n: int, extra_edges: int, rng: np.random.Generator) -> Graph:
    """Connected sparse graph: uniform random attachment tree plus extras."""
    edges = {(int(rng.integers(0, i)), i) for i in range(1, n)}
    g = Graph.from_edges(n, edges)
    return _add_random_edges(g, extra_edges, rng)


def clustered_graph(n: int, extra_edges: int, rng: np.random.Generator) -> Graph:
    """Connected triangle-rich graph: chained triangles plus extras."""
    edges = set()
    triple_starts = list(range(0, n - 2, 3))
    for s in triple_starts:
        edges.update({(s, s + 1), (s, s + 2), (s + 1, s + 2)})
    covered = triple_starts[-1] + 3 if triple_starts else 0
    for v in range(covered, n):  # leftover vertices hang off the last triangle
        edges.add((int(rng.integers(0, covered)), v))
    for a, b in zip(triple_starts, triple_starts[1:]):
        edges.add((a + int(rng.integers(0, 3)), b + int(rng.integers(0, 3))))
    g = Graph.from_edges(n, edges)
    return _add_random_edges(g, extra_edges, rng)


def _add_random_edges(g: Graph, count: int, rng: np.random.Generator) -> Graph:
    non_edges = [
        (i, j)
        for i in range(g.vertex_count)
        for j in range(i + 1, g.vertex_count)
        if (i, j) not in g.edges
    ]
    take = min(count, len(non_edges))
    if take == 0:
        return g
    chosen = rng.choice(len(non_edges), size=take, replace=False)
    return Graph(g.vertex_count, g.edges | {non_edges[i] for i in chosen})


def make_demo_dataset(n_per_class: int = 20, seed: int = 7, name: str = "DEMO") -> GraphDataset:
    """Two classes of connected graphs with overlapping sizes.

    Class 0 graphs are tree-like (few cycles), class 1 graphs are built
    from chained triangles; both draw 10..14 vertices and a random number
    of extra edges, so edge count alone does not separate them.
    """
    rng = np.random.default_rng(seed)
    graphs: list[Graph] = []
    labels: list[int] = []
    for _ in range(n_per_class):
        n = int(rng.integers(10, 15))
        graphs.append(random_tree_graph(n, int(rng.integers(2, 6)), rng))
        labels.append(0)
    for _ in range(n_per_class):
        n = int(rng.integers(10, 15))
        graphs.append(clustered_graph(n, int(rng.integers(2, 6)), rng))
        labels.append(1)
    return GraphDataset(
        name=name,
        graphs=tuple(graphs),
        labels=tuple(labels),
        label_vocab={0: 0, 1: 1},
    )
