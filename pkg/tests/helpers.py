"""Independent brute-force oracles shared across the test suite.

Everything here deliberately avoids the package's own traversal and
search code paths: components come from boolean transitive closure,
two-hop queries from matrix powers, and threshold optima from scanning
every breakpoint region.
"""

from __future__ import annotations

import numpy as np

from graphevolve.graph import Graph


def component_count_oracle(g: Graph) -> int:
    n = g.vertex_count
    if n == 0:
        return 0
    reach = np.eye(n, dtype=bool) | g.adjacency_matrix().astype(bool)
    while True:
        nxt = reach | (reach @ reach)
        if (nxt == reach).all():
            break
        reach = nxt
    return len({tuple(row) for row in reach})


def two_hop_oracle(g: Graph, i: int, j: int) -> bool:
    a = g.adjacency_matrix()
    return bool((a @ a)[i, j] > 0)


def motif_pairs_oracle(g: Graph) -> set[tuple[int, int]]:
    """Non-adjacent pairs with a nonzero squared-adjacency entry."""
    a = g.adjacency_matrix()
    a2 = a @ a
    return {
        (i, j)
        for i in range(g.vertex_count)
        for j in range(i + 1, g.vertex_count)
        if a[i, j] == 0 and a2[i, j] > 0
    }


def threshold_objective_oracle(theta: float, reliabilities, correct) -> int:
    total = 0
    for r, ok in zip(reliabilities, correct):
        if ok and theta > r:
            total += 1
        if not ok and r > theta:
            total += 1
    return total


def best_threshold_objective_oracle(reliabilities, correct) -> int:
    """True global minimum: scan breakpoints plus midpoints of every region."""
    points = sorted(set(reliabilities) | {0.0, 1.0})
    candidates = list(points)
    candidates.extend((a + b) / 2 for a, b in zip(points, points[1:]))
    candidates.append(points[-1] + 1.0)
    return min(threshold_objective_oracle(t, reliabilities, correct) for t in candidates)


def random_graph(rng: np.random.Generator, n: int, edge_prob: float = 0.4) -> Graph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = {p for p in pairs if rng.random() < edge_prob}
    return Graph.from_edges(n, edges)
