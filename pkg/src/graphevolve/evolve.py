"""Label-reliability filtering and the iterative augment-filter-retrain loop."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .augment import AugmentationConfig, augment_pool
from .classifiers import Classifier, ClassifierConfig, accuracy, fit
from .features import FeatureConfig, extract_features
from .graph import Graph


@dataclass(frozen=True)
class ConfusionMatrix:
    """Per-true-class mean of predicted distributions over a validation set."""

    q: np.ndarray
    class_counts: np.ndarray


def confusion_matrix(probs: np.ndarray, labels, n_classes: int) -> ConfusionMatrix:
    """Row k averages the predicted distributions of examples with true class k.

    Classes absent from the validation set get a uniform row, the neutral
    choice that keeps every row a distribution.
    """
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels, dtype=int)
    q = np.full((n_classes, n_classes), 1.0 / n_classes)
    counts = np.zeros(n_classes, dtype=int)
    for k in range(n_classes):
        mask = labels == k
        counts[k] = int(mask.sum())
        if counts[k]:
            q[k] = probs[mask].mean(axis=0)
    return ConfusionMatrix(q=q, class_counts=counts)


def label_reliability(p, q_row) -> float:
    """Inner product of an example's distribution with its class profile."""
    p = np.asarray(p, dtype=float)
    q_row = np.asarray(q_row, dtype=float)
    if p.shape != q_row.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q_row.shape}")
    return float(p @ q_row)


def label_reliabilities(probs: np.ndarray, labels, cm: ConfusionMatrix) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels, dtype=int)
    return (probs * cm.q[labels]).sum(axis=1)


def threshold_objective(theta: float, reliabilities, correct) -> int:
    """Count of correct examples below theta plus incorrect examples above it."""
    r = np.asarray(reliabilities, dtype=float)
    c = np.asarray(correct, dtype=bool)
    return int((c & (r < theta)).sum() + (~c & (r > theta)).sum())


def find_threshold(reliabilities, correct) -> float:
    """Reliability cutoff minimizing the filtration objective on validation data.

    The objective is piecewise constant with breakpoints only at observed
    reliabilities, so scanning {0} plus the observed values is exact. Among
    minimizers the smallest is returned, which admits the most examples.
    """
    r = np.asarray(reliabilities, dtype=float)
    c = np.asarray(correct, dtype=bool)
    if r.size == 0 or r.size != c.size:
        raise ValueError("reliabilities and correctness flags must be nonempty and equal length")
    candidates = np.unique(np.concatenate(([0.0], r)))
    objectives = [threshold_objective(t, r, c) for t in candidates]
    return float(candidates[int(np.argmin(objectives))])


def filter_pool(reliabilities, threshold: float) -> np.ndarray:
    """Boolean mask of pool examples whose reliability strictly exceeds the cutoff."""
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    return np.asarray(reliabilities, dtype=float) > threshold


@dataclass(frozen=True)
class IterationRecord:
    pool_size: int
    accepted: int
    threshold: float
    train_size: int
    val_accuracy: float
    test_accuracy: float


@dataclass(frozen=True)
class EvolutionReport:
    """Per-iteration bookkeeping of one evolution run on fixed splits."""

    baseline_val_accuracy: float
    baseline_test_accuracy: float
    iterations: tuple[IterationRecord, ...] = ()

    @property
    def final_test_accuracy(self) -> float:
        if self.iterations:
            return self.iterations[-1].test_accuracy
        return self.baseline_test_accuracy


@dataclass(frozen=True)
class EvolveConfig:
    """Everything the evolution loop needs besides the data splits."""

    augmentation: AugmentationConfig
    features: FeatureConfig = field(default_factory=FeatureConfig)
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    iterations: int = 5
    per_graph: int = 1

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.per_graph < 1:
            raise ValueError("per_graph must be >= 1")


def evolve(
    train_graphs: list[Graph],
    train_labels,
    val_graphs: list[Graph],
    val_labels,
    test_graphs: list[Graph],
    test_labels,
    n_classes: int,
    cfg: EvolveConfig,
    seed: int = 0,
) -> tuple[EvolutionReport, Classifier]:
    """Iteratively augment the training set, filter by label reliability, retrain.

    Each iteration: build an augmented pool from the current training set,
    calibrate a reliability threshold on the validation set under the
    current model, append the pool examples that clear it, and retrain
    from scratch on the merged set. Validation and test sets are never
    touched; the report records every iteration plus the pre-trained
    baseline. The run is a pure function of its inputs and ``seed``.
    """
    train_labels = list(np.asarray(train_labels, dtype=int))
    val_labels = np.asarray(val_labels, dtype=int)
    test_labels = np.asarray(test_labels, dtype=int)

    cur_graphs = list(train_graphs)
    cur_features = extract_features(cur_graphs, cfg.features)
    val_features = extract_features(val_graphs, cfg.features)
    test_features = extract_features(test_graphs, cfg.features)

    def train_model() -> Classifier:
        return fit(cur_features, np.asarray(train_labels), cfg.classifier, n_classes=n_classes)

    model = train_model()
    baseline_val = accuracy(model, val_features, val_labels)
    baseline_test = accuracy(model, test_features, test_labels)

    records: list[IterationRecord] = []
    for iteration in range(cfg.iterations):
        pool_seed = _iteration_seed(seed, iteration)
        pool, _ = augment_pool(cur_graphs, train_labels, cfg.augmentation, cfg.per_graph, pool_seed)

        val_probs = np.atleast_2d(model.predict_proba(val_features))
        cm = confusion_matrix(val_probs, val_labels, n_classes)
        val_rel = label_reliabilities(val_probs, val_labels, cm)
        val_correct = val_probs.argmax(axis=1) == val_labels
        threshold = find_threshold(val_rel, val_correct)

        accepted = 0
        if pool:
            pool_graphs = [g for g, _ in pool]
            pool_labels = np.array([y for _, y in pool], dtype=int)
            pool_features = extract_features(pool_graphs, cfg.features)
            pool_probs = np.atleast_2d(model.predict_proba(pool_features))
            pool_rel = label_reliabilities(pool_probs, pool_labels, cm)
            mask = filter_pool(pool_rel, threshold)
            accepted = int(mask.sum())
            if accepted:
                keep = np.flatnonzero(mask)
                cur_graphs.extend(pool_graphs[i] for i in keep)
                train_labels.extend(int(pool_labels[i]) for i in keep)
                cur_features = np.vstack([cur_features, pool_features[keep]])

        model = train_model()
        records.append(
            IterationRecord(
                pool_size=len(pool),
                accepted=accepted,
                threshold=threshold,
                train_size=len(cur_graphs),
                val_accuracy=accuracy(model, val_features, val_labels),
                test_accuracy=accuracy(model, test_features, test_labels),
            )
        )

    report = EvolutionReport(
        baseline_val_accuracy=baseline_val,
        baseline_test_accuracy=baseline_test,
        iterations=tuple(records),
    )
    return report, model


def _iteration_seed(seed: int, iteration: int) -> int:
    return int(np.random.SeedSequence((seed, iteration)).generate_state(1)[0])
