from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from graphevolve.datasets import GraphDataset, save_tu_dataset
from graphevolve.graph import Graph

REPO_ROOT = Path(__file__).resolve().parents[1]


@st.composite
def graph_strategy(draw, min_vertices: int = 1, max_vertices: int = 12):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return Graph.from_edges(n, edges)


@pytest.fixture(scope="session")
def demo_dataset():
    from graphevolve.synthetic import make_demo_dataset

    return make_demo_dataset(n_per_class=20, seed=7)


@pytest.fixture()
def fixture_dataset() -> GraphDataset:
    """Two hand-written graphs: a triangle and a 3-vertex path."""
    return GraphDataset(
        name="FIXTURE",
        graphs=(
            Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
            Graph.from_edges(3, [(0, 1), (1, 2)]),
        ),
        labels=(0, 1),
        label_vocab={-1: 0, 1: 1},
    )


@pytest.fixture()
def fixture_dir(tmp_path, fixture_dataset) -> Path:
    save_tu_dataset(fixture_dataset, tmp_path)
    return tmp_path
