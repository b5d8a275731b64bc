"""Graph-to-graph augmentations that rewire edges under preservation rules.

Both mappings keep the vertex set, the edge count, and (by rejection
sampling) the number of connected components of the source graph, and
copy its label. ``random`` swaps uniformly chosen edges for uniformly
chosen non-edges; ``motif-similarity`` closes open triads weighted by
vertex similarity and deletes a low-similarity edge of each triad.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import EdgeEdit, Graph, Pair, normalize_pair
from .similarity import (
    deletion_weights,
    get_scorer,
    normalized_weights,
    sample_indices_without_replacement,
    score_matrix,
    weighted_choice,
)

MAPPING_KINDS = ("random", "motif-similarity")


@dataclass(frozen=True)
class AugmentationConfig:
    mapping: str
    beta: float = 0.15
    similarity_index: str = "ra"
    max_retries: int = 10
    preserve_components: bool = True

    def __post_init__(self):
        if self.mapping not in MAPPING_KINDS:
            raise ValueError(f"unknown mapping {self.mapping!r}; expected one of {MAPPING_KINDS}")
        if not (0.0 < self.beta < 1.0):
            raise ValueError("beta must lie strictly between 0 and 1")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        get_scorer(self.similarity_index)


def swap_budget(edge_count: int, beta: float) -> int:
    """Number of edge swaps for a graph with ``edge_count`` edges: ceil(m * beta)."""
    return math.ceil(edge_count * beta)


def _upper_pairs(mask: np.ndarray) -> list[Pair]:
    """Pairs (i, j) with i < j where mask holds, in row-major (sorted) order."""
    mask = np.triu(mask, k=1)
    return [(int(i), int(j)) for i, j in np.argwhere(mask)]


def nonadjacent_pairs(g: Graph) -> list[Pair]:
    if g.vertex_count == 0:
        return []
    return _upper_pairs(g.adjacency_matrix() == 0)


def build_random_candidates(g: Graph) -> tuple[list[Pair], list[Pair]]:
    """Deletion candidates (all edges) and addition candidates (all non-edges)."""
    return sorted(g.edges), nonadjacent_pairs(g)


def build_motif_candidates(g: Graph) -> list[Pair]:
    """Open-triad head/tail pairs: non-adjacent vertices joined by a length-2 path."""
    if g.vertex_count == 0:
        return []
    a = g.adjacency_matrix()
    return _upper_pairs((a == 0) & (a @ a > 0))


def motif_deletion_candidates(g: Graph, i: int, j: int) -> list[Pair]:
    """Edges lying on a length-2 path between i and j: (i,z) and (z,j) per common z."""
    edges = set()
    for z in g.common_neighbors(i, j):
        edges.add(normalize_pair(i, z))
        edges.add(normalize_pair(z, j))
    return sorted(edges)


@dataclass(frozen=True)
class PlannedSwap:
    """One motif rewiring: the closed head/tail pair and the removed triad edge."""

    addition: Pair
    deletion: Pair


def plan_random_edit(g: Graph, cfg: AugmentationConfig, rng: np.random.Generator) -> EdgeEdit | None:
    """Draw one random-mapping edit: k uniform deletions and k uniform additions.

    The draw count is ceil(m * beta) capped to both candidate-set sizes so
    additions and deletions always pair up; returns None when no swap is
    possible.
    """
    del_cands, add_cands = build_random_candidates(g)
    k = min(swap_budget(g.edge_count, cfg.beta), len(del_cands), len(add_cands))
    if k == 0:
        return None
    del_idx = rng.choice(len(del_cands), size=k, replace=False)
    add_idx = rng.choice(len(add_cands), size=k, replace=False)
    return EdgeEdit(
        additions=frozenset(add_cands[i] for i in add_idx),
        deletions=frozenset(del_cands[i] for i in del_idx),
    )


def plan_motif_edit(
    g: Graph, cfg: AugmentationConfig, rng: np.random.Generator
) -> tuple[EdgeEdit, tuple[PlannedSwap, ...]] | None:
    """Draw one motif-similarity edit and report the addition/deletion pairing.

    Head/tail pairs are drawn without replacement, weighted by vertex
    similarity; each drawn pair deletes one edge of its own triad set,
    weighted toward low similarity. All candidates and weights come from a
    snapshot of ``g``, so draws never cascade. A pair whose drawn deletion
    was already claimed by an earlier pair is dropped together with its
    addition, keeping additions and deletions paired one to one.
    """
    if g.vertex_count == 0:
        return None
    a = g.adjacency_matrix()
    rows, cols = np.nonzero(np.triu((a == 0) & (a @ a > 0), k=1))
    k = min(swap_budget(g.edge_count, cfg.beta), rows.size)
    if k == 0:
        return None
    matrix = score_matrix(g, cfg.similarity_index, adjacency=a)
    weights = normalized_weights(matrix[rows, cols])
    drawn = sample_indices_without_replacement(weights, k, rng)

    swaps: list[PlannedSwap] = []
    claimed: set[Pair] = set()
    for t in drawn:
        i, j = int(rows[t]), int(cols[t])
        commons = np.flatnonzero(a[i] * a[j])
        edges = sorted(
            {normalize_pair(i, int(z)) for z in commons}
            | {normalize_pair(int(z), j) for z in commons}
        )
        erows, ecols = zip(*edges)
        deletion = edges[weighted_choice(deletion_weights(matrix[erows, ecols]), rng)]
        if deletion in claimed:
            continue
        claimed.add(deletion)
        swaps.append(PlannedSwap(addition=(i, j), deletion=deletion))

    if not swaps:
        return None
    edit = EdgeEdit(
        additions=frozenset(s.addition for s in swaps),
        deletions=frozenset(s.deletion for s in swaps),
    )
    return edit, tuple(swaps)


def _rewire(g: Graph, cfg: AugmentationConfig, rng: np.random.Generator, plan_edit) -> Graph | None:
    """Plan-apply-check loop shared by both mappings.

    Re-plans with fresh draws while the component count changes, up to
    cfg.max_retries attempts in total.
    """
    components = g.component_count() if cfg.preserve_components else None
    for _ in range(cfg.max_retries):
        edit = plan_edit(g, cfg, rng)
        if edit is None:
            return None
        candidate = g.apply_edit(edit)
        if components is None or candidate.component_count() == components:
            return candidate
    return None


def random_mapping(g: Graph, cfg: AugmentationConfig, rng: np.random.Generator) -> Graph | None:
    """Rewire by uniform edge swaps; None when no valid variant was found."""
    return _rewire(g, cfg, rng, plan_random_edit)


def motif_similarity_mapping(g: Graph, cfg: AugmentationConfig, rng: np.random.Generator) -> Graph | None:
    """Rewire by similarity-weighted open-triad swaps; None when impossible."""

    def plan(graph, config, gen):
        planned = plan_motif_edit(graph, config, gen)
        return None if planned is None else planned[0]

    return _rewire(g, cfg, rng, plan)


MAPPINGS = {
    "random": random_mapping,
    "motif-similarity": motif_similarity_mapping,
}


@dataclass
class AugmentationStats:
    attempted: int = 0
    produced: int = 0
    failed: int = 0


def augment_pool(
    graphs,
    labels,
    cfg: AugmentationConfig,
    per_graph: int = 1,
    seed: int = 0,
) -> tuple[list[tuple[Graph, int]], AugmentationStats]:
    """Generate up to ``per_graph`` labeled variants of every input graph.

    Each (graph, variant) slot gets its own generator derived from ``seed``
    and its position, so pools are reproducible and order-independent of
    any parallel execution of the slots.
    """
    if per_graph < 1:
        raise ValueError("per_graph must be >= 1")
    mapping = MAPPINGS[cfg.mapping]
    pool: list[tuple[Graph, int]] = []
    stats = AugmentationStats()
    for pos, (g, y) in enumerate(zip(graphs, labels)):
        for variant in range(per_graph):
            stats.attempted += 1
            rng = np.random.default_rng((seed, pos, variant))
            out = mapping(g, cfg, rng)
            if out is None:
                stats.failed += 1
            else:
                stats.produced += 1
                pool.append((out, y))
    return pool, stats
