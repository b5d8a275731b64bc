"""Vertex-pair similarity scores and weighted sampling without replacement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SampleError
from .graph import Graph, Pair


def ra_score(g: Graph, i: int, j: int) -> float:
    """Resource-allocation similarity: sum of 1/degree over common neighbors."""
    return sum(1.0 / g.degree(z) for z in g.common_neighbors(i, j))


def cn_score(g: Graph, i: int, j: int) -> float:
    """Common-neighbor count, a cheaper drop-in alternative to ra_score."""
    return float(len(g.common_neighbors(i, j)))


SCORERS = {"ra": ra_score, "cn": cn_score}


def get_scorer(index: str):
    try:
        return SCORERS[index]
    except KeyError:
        raise ValueError(f"unknown similarity index {index!r}; expected one of {sorted(SCORERS)}") from None


def score_matrix(g: Graph, index: str = "ra", *, adjacency: np.ndarray | None = None) -> np.ndarray:
    """All-pairs similarity scores in one shot.

    RA(i, j) sums 1/degree over common neighbors, which is the (i, j)
    entry of A·D^-1·A; CN(i, j) is the entry of A². Entries agree with
    the per-pair scorers up to summation order.
    """
    get_scorer(index)
    a = g.adjacency_matrix() if adjacency is None else adjacency
    if index == "cn":
        return a @ a
    degrees = a.sum(axis=1)
    inv = np.divide(1.0, degrees, out=np.zeros_like(degrees), where=degrees > 0)
    return (a * inv[None, :]) @ a


@dataclass(frozen=True, eq=False)
class WeightedCandidates:
    """Vertex pairs with raw similarity scores and normalized sampling weights."""

    items: tuple[Pair, ...]
    scores: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if not (len(self.items) == len(self.scores) == len(self.weights)):
            raise ValueError("items, scores and weights must have equal length")
        if len(self.items) > 0:
            if np.any(self.weights < 0):
                raise ValueError("weights must be nonnegative")
            if abs(float(self.weights.sum()) - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")

    def __len__(self) -> int:
        return len(self.items)


def normalized_weights(scores: np.ndarray) -> np.ndarray:
    """Scores scaled to a distribution; an all-zero score set falls back to uniform."""
    scores = np.asarray(scores, dtype=float)
    total = float(scores.sum())
    if total <= 0.0:
        return np.full(scores.shape, 1.0 / len(scores))
    return scores / total


def addition_weights(
    g: Graph, pairs: list[Pair], index: str = "ra", *, matrix: np.ndarray | None = None
) -> WeightedCandidates:
    """Score candidate pairs and normalize the scores into sampling weights.

    A precomputed ``score_matrix`` can be passed to score many candidate
    sets of one graph without rescoring.
    """
    if not pairs:
        raise ValueError("addition_weights requires a nonempty pair list")
    if matrix is None:
        matrix = score_matrix(g, index)
    rows, cols = zip(*pairs)
    scores = matrix[rows, cols].astype(float)
    return WeightedCandidates(tuple(pairs), scores, normalized_weights(scores))


def deletion_weights(scores) -> np.ndarray:
    """Sampling weights that favor low-similarity items.

    Raw weight per item is 1 - s/sum(s), with the sum taken over the given
    score set, then renormalized to a distribution. Degenerate cases: a
    single item gets weight 1; an all-zero score set is uniform.
    """
    arr = np.asarray(scores, dtype=float)
    if arr.size == 0:
        raise ValueError("deletion_weights requires at least one score")
    if np.any(arr < 0):
        raise ValueError("scores must be nonnegative")
    if arr.size == 1:
        return np.array([1.0])
    total = float(arr.sum())
    if total <= 0.0:
        return np.full(arr.shape, 1.0 / arr.size)
    raw = 1.0 - arr / total
    return raw / raw.sum()


def weighted_choice(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Index of one item drawn with probability proportional to its weight.

    Weights must already form a distribution; zero-weight items occupy a
    zero-width slice of the unit interval and are never selected.
    """
    cumulative = np.cumsum(weights)
    idx = min(int(np.searchsorted(cumulative, rng.random(), side="right")), len(weights) - 1)
    while idx > 0 and weights[idx] == 0:  # rounding in cumsum must not reach a zero-weight item
        idx -= 1
    return idx


def sample_indices_without_replacement(
    weights: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Indices of k distinct items drawn with probability proportional to weight.

    Uses exponential keys (key = Exp(1)/weight, take the k smallest), which
    is distributionally identical to drawing items one at a time and
    renormalizing the remaining weights.
    """
    if k > len(weights):
        raise SampleError(f"cannot sample {k} items from {len(weights)} candidates")
    if k == 0:
        return np.zeros(0, dtype=int)
    with np.errstate(divide="ignore"):
        keys = rng.exponential(size=len(weights)) / weights
    return np.argsort(keys, kind="stable")[:k]


def weighted_sample_without_replacement(
    cands: WeightedCandidates, k: int, rng: np.random.Generator
) -> list[Pair]:
    """Draw k distinct candidate pairs with probability proportional to weight."""
    order = sample_indices_without_replacement(cands.weights, k, rng)
    return [cands.items[i] for i in order]
