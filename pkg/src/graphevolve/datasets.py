"""TU-format multi-graph datasets, statistics, and stratified splitting.

The TU text layout is three files per dataset in one directory:
``<name>_A.txt`` (one directed edge per line, "i, j", 1-indexed global
vertex ids), ``<name>_graph_indicator.txt`` (line v holds the graph id of
global vertex v), and ``<name>_graph_labels.txt`` (line g holds the raw
integer label of graph g). Undirected edges normally appear in both
directions and are stored once.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, DataError, SplitError
from .graph import Graph, normalize_pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GraphDataset:
    """Ordered collection of (graph, class index) pairs with a label vocabulary."""

    name: str
    graphs: tuple[Graph, ...]
    labels: tuple[int, ...]
    label_vocab: dict[int, int]  # raw file label -> class index

    def __post_init__(self):
        if len(self.graphs) == 0:
            raise DataError("dataset is empty")
        if len(self.graphs) != len(self.labels):
            raise DataError("graphs and labels differ in length")
        if self.class_count < 2:
            raise DataError("dataset must contain at least two classes")
        if any(not (0 <= y < self.class_count) for y in self.labels):
            raise DataError("labels must be class indices in 0..|Y|-1")

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def class_count(self) -> int:
        return len(self.label_vocab)

    def class_sizes(self) -> list[int]:
        sizes = [0] * self.class_count
        for y in self.labels:
            sizes[y] += 1
        return sizes

    @property
    def bias(self) -> float:
        """Share of the dominant class, the accuracy floor of a constant classifier."""
        return max(self.class_sizes()) / len(self)

    @property
    def avg_vertex_count(self) -> float:
        return sum(g.vertex_count for g in self.graphs) / len(self)

    @property
    def avg_edge_count(self) -> float:
        return sum(g.edge_count for g in self.graphs) / len(self)


@dataclass(frozen=True)
class Split:
    """Disjoint train/validation/test index lists into a dataset."""

    train: tuple[int, ...]
    val: tuple[int, ...]
    test: tuple[int, ...]

    def __post_init__(self):
        parts = (self.train, self.val, self.test)
        if any(len(p) == 0 for p in parts):
            raise SplitError("every split part must be nonempty")
        combined = self.train + self.val + self.test
        if len(set(combined)) != len(combined):
            raise SplitError("split parts must be pairwise disjoint")

    def validate_covers(self, size: int) -> None:
        if sorted(self.train + self.val + self.test) != list(range(size)):
            raise SplitError("split parts must cover all dataset indices")


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise ParseError(path, 0, "file not found")
    return path.read_text().splitlines()


def _parse_int(token: str, path: Path, line: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise ParseError(path, line, f"expected an integer, got {token.strip()!r}") from None


def load_tu_dataset(directory, name: str) -> GraphDataset:
    """Parse a TU-format dataset from ``directory``.

    Vertex ids are remapped per graph to dense 0-indexed integers; raw
    labels are mapped to class indices by ascending raw value. Edge lines
    appearing in only one direction are accepted with a warning.
    """
    directory = Path(directory)
    adj_path = directory / f"{name}_A.txt"
    ind_path = directory / f"{name}_graph_indicator.txt"
    lab_path = directory / f"{name}_graph_labels.txt"

    # vertex -> graph membership
    graph_of: list[int] = []  # 0-based global vertex -> 1-based graph id
    for lineno, raw in enumerate(_read_lines(ind_path), start=1):
        if not raw.strip():
            continue
        gid = _parse_int(raw, ind_path, lineno)
        if gid < 1:
            raise ParseError(ind_path, lineno, f"graph id must be >= 1, got {gid}")
        graph_of.append(gid)
    if not graph_of:
        raise ParseError(ind_path, 0, "no vertices listed")
    total_vertices = len(graph_of)
    graph_ids = sorted(set(graph_of))
    if graph_ids[0] != 1 or graph_ids[-1] != len(graph_ids):
        raise ParseError(ind_path, 0, "graph ids must be contiguous starting at 1")
    n_graphs = len(graph_ids)

    # graph labels, one line per graph id
    raw_labels: list[int] = []
    lab_lines = _read_lines(lab_path)
    for lineno, raw in enumerate(lab_lines, start=1):
        if not raw.strip():
            continue
        raw_labels.append(_parse_int(raw, lab_path, lineno))
    if len(raw_labels) != n_graphs:
        raise ParseError(lab_path, len(lab_lines) + 1, f"expected {n_graphs} labels, found {len(raw_labels)}")

    # local vertex numbering: ascending global id within each graph
    local_id = [0] * total_vertices
    vertex_counts = [0] * n_graphs
    for v, gid in enumerate(graph_of):
        local_id[v] = vertex_counts[gid - 1]
        vertex_counts[gid - 1] += 1

    # edges, deduplicating the two listed directions
    edge_sets: list[set[tuple[int, int]]] = [set() for _ in range(n_graphs)]
    direction_counts: dict[tuple[int, tuple[int, int]], int] = {}
    for lineno, raw in enumerate(_read_lines(adj_path), start=1):
        if not raw.strip():
            continue
        tokens = raw.split(",")
        if len(tokens) != 2:
            raise ParseError(adj_path, lineno, f"expected 'i, j', got {raw.strip()!r}")
        u = _parse_int(tokens[0], adj_path, lineno)
        v = _parse_int(tokens[1], adj_path, lineno)
        for w in (u, v):
            if not (1 <= w <= total_vertices):
                raise ParseError(adj_path, lineno, f"vertex id {w} has no graph_indicator entry")
        if graph_of[u - 1] != graph_of[v - 1]:
            raise ParseError(
                adj_path, lineno,
                f"edge ({u}, {v}) crosses graphs {graph_of[u - 1]} and {graph_of[v - 1]}",
            )
        if u == v:
            raise ParseError(adj_path, lineno, f"self-loop on vertex {u}")
        gidx = graph_of[u - 1] - 1
        pair = normalize_pair(local_id[u - 1], local_id[v - 1])
        edge_sets[gidx].add(pair)
        key = (gidx, pair)
        direction_counts[key] = direction_counts.get(key, 0) + 1

    asymmetric = sum(1 for c in direction_counts.values() if c != 2)
    if asymmetric:
        logger.warning("%s: %d edge(s) not listed in exactly both directions", adj_path, asymmetric)

    graphs = tuple(Graph(vertex_counts[i], frozenset(edge_sets[i])) for i in range(n_graphs))
    vocab = {raw: idx for idx, raw in enumerate(sorted(set(raw_labels)))}
    labels = tuple(vocab[raw] for raw in raw_labels)
    return GraphDataset(name=name, graphs=graphs, labels=labels, label_vocab=vocab)


def save_tu_dataset(ds: GraphDataset, directory, name: str | None = None) -> None:
    """Write a dataset back to TU layout (both edge directions listed)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = name or ds.name
    inverse_vocab = {idx: raw for raw, idx in ds.label_vocab.items()}

    offsets = []
    offset = 0
    for g in ds.graphs:
        offsets.append(offset)
        offset += g.vertex_count

    directed = []
    for gidx, g in enumerate(ds.graphs):
        base = offsets[gidx] + 1
        for u, v in g.edges:
            directed.append((base + u, base + v))
            directed.append((base + v, base + u))
    directed.sort()

    (directory / f"{name}_A.txt").write_text("".join(f"{u}, {v}\n" for u, v in directed))
    indicator_lines = []
    for gidx, g in enumerate(ds.graphs):
        indicator_lines.extend(f"{gidx + 1}\n" for _ in range(g.vertex_count))
    (directory / f"{name}_graph_indicator.txt").write_text("".join(indicator_lines))
    (directory / f"{name}_graph_labels.txt").write_text(
        "".join(f"{inverse_vocab[y]}\n" for y in ds.labels)
    )


def _largest_remainder(count: int, ratios: tuple[float, ...]) -> list[int]:
    """Apportion ``count`` seats to parts proportionally.

    Leftover seats go to the largest remainders; ties favor the part with
    the smaller ratio, which keeps minority parts (validation) populated.
    """
    quotas = [count * r for r in ratios]
    base = [math.floor(q) for q in quotas]
    leftover = count - sum(base)
    order = sorted(range(len(ratios)), key=lambda p: (-(quotas[p] - base[p]), ratios[p], p))
    for p in order[:leftover]:
        base[p] += 1
    return base


def _members_by_class(labels, indices) -> list[list[int]]:
    classes = max(labels) + 1 if len(labels) else 0
    members: list[list[int]] = [[] for _ in range(classes)]
    for i in indices:
        members[labels[i]].append(i)
    return members


def _stratified_assign(
    members: list[list[int]], ratios: tuple[float, ...], rng: np.random.Generator
) -> list[list[int]]:
    """Assign class member lists to len(ratios) parts by per-class apportionment.

    When a part ends up empty, one item is moved into it from the (part,
    class) slot with the largest surplus over its exact quota (ties: lower
    part index, then lower class index). A positive-surplus donor always
    exists and the move keeps every per-class deviation below one; raises
    when no donor can spare an item.
    """
    parts: list[list[list[int]]] = [[[] for _ in members] for _ in ratios]
    for cls, cls_members in enumerate(members):
        if not cls_members:
            continue
        shuffled = [cls_members[i] for i in rng.permutation(len(cls_members))]
        counts = _largest_remainder(len(shuffled), ratios)
        start = 0
        for p, c in enumerate(counts):
            parts[p][cls] = shuffled[start:start + c]
            start += c

    for p in range(len(ratios)):
        if sum(len(seg) for seg in parts[p]):
            continue
        best = None
        for q in range(len(ratios)):
            if q == p or sum(len(seg) for seg in parts[q]) <= 1:
                continue
            for cls in range(len(members)):
                if not parts[q][cls]:
                    continue
                surplus = len(parts[q][cls]) - len(members[cls]) * ratios[q]
                key = (surplus, -q, -cls)
                if best is None or key > best[0]:
                    best = (key, q, cls)
        if best is None:
            raise SplitError("dataset too small to give each part at least one example")
        _, q, cls = best
        parts[p][cls].append(parts[q][cls].pop())

    return [sorted(i for seg in part for i in seg) for part in parts]


def _check_ratios(ratios, expected_len: int) -> tuple[float, ...]:
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != expected_len:
        raise ValueError(f"expected {expected_len} ratios, got {len(ratios)}")
    if any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("ratios must sum to 1")
    return ratios


def stratified_split(
    ds: GraphDataset, ratios=(0.7, 0.1, 0.2), seed: int = 0
) -> Split:
    """Split the dataset into train/val/test with per-class proportionality.

    Each class is apportioned to the three parts by largest remainder, so
    per-class counts deviate from exact proportion by at most one. The
    shuffle is fully determined by ``seed``.
    """
    ratios = _check_ratios(ratios, 3)
    rng = np.random.default_rng(seed)
    members = _members_by_class(ds.labels, range(len(ds)))
    train, val, test = _stratified_assign(members, ratios, rng)
    split = Split(tuple(train), tuple(val), tuple(test))
    split.validate_covers(len(ds))
    return split


def kfold(ds: GraphDataset, k: int, seed: int = 0, train_val_ratio=(7 / 8, 1 / 8)) -> list[Split]:
    """Stratified k-fold splits: each fold serves once as the test part.

    The remaining data of each fold is re-split into train/val at 7:1.
    Fold membership is a partition of the dataset and is deterministic in
    ``seed``.
    """
    if k < 2:
        raise SplitError("k must be at least 2")
    sizes = ds.class_sizes()
    if min(sizes) < k:
        raise SplitError(f"smallest class has {min(sizes)} members, fewer than k={k} folds")
    train_val_ratio = _check_ratios(train_val_ratio, 2)

    fold_rng = np.random.default_rng((seed, 0))
    members = _members_by_class(ds.labels, range(len(ds)))
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls_members in members:
        if not cls_members:
            continue
        shuffled = [cls_members[i] for i in fold_rng.permutation(len(cls_members))]
        for f in range(k):
            folds[f].extend(shuffled[f::k])

    splits = []
    for f in range(k):
        test = sorted(folds[f])
        rest = sorted(set(range(len(ds))) - set(test))
        rest_members = _members_by_class(ds.labels, rest)
        split_rng = np.random.default_rng((seed, 1, f))
        train, val = _stratified_assign(rest_members, train_val_ratio, split_rng)
        split = Split(tuple(train), tuple(val), tuple(test))
        split.validate_covers(len(ds))
        splits.append(split)
    return splits
