"""Topology-only feature vectors from the combinatorial Laplacian spectrum."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph

T_MIN = 1e-2
T_MAX = 1e2


@dataclass(frozen=True)
class FeatureConfig:
    kind: str = "spectral"
    dim: int = 128

    def __post_init__(self):
        if self.kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}; expected one of {sorted(FEATURE_KINDS)}")
        if self.dim < 1:
            raise ValueError("feature dimension must be >= 1")


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian L = D - A."""
    a = g.adjacency_matrix()
    return np.diag(a.sum(axis=1)) - a


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """Eigenvalues of L, ascending. Empty for the 0-vertex graph."""
    if g.vertex_count == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(laplacian(g))


def spectral_features(g: Graph, dim: int) -> np.ndarray:
    """Ascending Laplacian eigenvalues, truncated or zero-padded to ``dim``."""
    if dim < 1:
        raise ValueError("feature dimension must be >= 1")
    spectrum = laplacian_spectrum(g)
    out = np.zeros(dim)
    take = min(dim, spectrum.shape[0])
    out[:take] = spectrum[:take]
    return out


def heat_trace_features(g: Graph, dim: int) -> np.ndarray:
    """Heat-kernel trace sum(exp(-t * lambda_i)) / n on a log grid of t.

    The 1/n normalization makes graphs of different sizes comparable: the
    value starts near 1 at small t and decays toward (#components)/n.
    """
    if dim < 1:
        raise ValueError("feature dimension must be >= 1")
    if g.vertex_count == 0:
        return np.zeros(dim)
    spectrum = laplacian_spectrum(g)
    t = heat_time_grid(dim)
    return np.exp(-np.outer(t, spectrum)).sum(axis=1) / g.vertex_count


def heat_time_grid(dim: int) -> np.ndarray:
    return np.logspace(np.log10(T_MIN), np.log10(T_MAX), dim)


FEATURE_KINDS = {
    "spectral": spectral_features,
    "heat-trace": heat_trace_features,
}


def extract_features(graphs: Iterable[Graph] | Sequence[Graph], config: FeatureConfig) -> np.ndarray:
    """Stack per-graph feature vectors into an (N, dim) matrix."""
    fn = FEATURE_KINDS[config.kind]
    rows = [fn(g, config.dim) for g in graphs]
    if not rows:
        return np.zeros((0, config.dim))
    return np.vstack(rows)
