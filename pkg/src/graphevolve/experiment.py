"""Experiment harness: repeated stratified cross-validation with report files.

A run evaluates one or more (mapping, feature, classifier) cells on the
same fold structure: for every repeat a fresh stratified k-fold partition
is drawn, and every (repeat, fold) trial runs the full evolution loop on
identical splits. All randomness derives from the master seed, so two
runs with the same configuration produce byte-identical reports.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .augment import MAPPING_KINDS, AugmentationConfig
from .classifiers import CLASSIFIER_KINDS, ClassifierConfig
from .datasets import GraphDataset, Split, kfold, load_tu_dataset
from .errors import ConfigError
from .evolve import EvolveConfig, EvolutionReport, evolve
from .features import FEATURE_KINDS, FeatureConfig

WORKERS_ENV = "GRAPHEVOLVE_WORKERS"


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_dir: str
    dataset: str
    mappings: tuple[str, ...] = ("motif-similarity",)
    features: tuple[str, ...] = ("spectral",)
    classifiers: tuple[str, ...] = ("knn",)
    beta: float = 0.15
    iterations: int = 5
    per_graph: int = 1
    dim: int = 128
    folds: int = 5
    repeats: int = 10
    seed: int = 0
    similarity_index: str = "ra"
    knn_k: int = 5
    learning_rate: float = 0.1
    l2: float = 1e-3
    max_epochs: int = 2000

    def __post_init__(self):
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        for m in self.mappings:
            if m not in MAPPING_KINDS:
                raise ConfigError(f"unknown mapping {m!r}")
        for f in self.features:
            if f not in FEATURE_KINDS:
                raise ConfigError(f"unknown feature kind {f!r}")
        for c in self.classifiers:
            if c not in CLASSIFIER_KINDS:
                raise ConfigError(f"unknown classifier kind {c!r}")
        if not (self.mappings and self.features and self.classifiers):
            raise ConfigError("at least one mapping, feature kind and classifier required")
        try:
            self.evolve_config(self.mappings[0], self.features[0], self.classifiers[0])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def evolve_config(self, mapping: str, feature_kind: str, classifier_kind: str) -> EvolveConfig:
        return EvolveConfig(
            augmentation=AugmentationConfig(
                mapping=mapping, beta=self.beta, similarity_index=self.similarity_index
            ),
            features=FeatureConfig(kind=feature_kind, dim=self.dim),
            classifier=ClassifierConfig(
                kind=classifier_kind,
                knn_k=self.knn_k,
                learning_rate=self.learning_rate,
                l2=self.l2,
                max_epochs=self.max_epochs,
            ),
            iterations=self.iterations,
            per_graph=self.per_graph,
        )


def derive_seed(master: int, *key: int) -> int:
    """Deterministic sub-seed for a (repeat, fold, ...) coordinate."""
    return int(np.random.SeedSequence((master, *key)).generate_state(1)[0])


@dataclass(frozen=True)
class TrialResult:
    repeat: int
    fold: int
    seed: int
    report: EvolutionReport


@dataclass(frozen=True)
class CellResult:
    """Aggregated accuracies for one (mapping, features, classifier) cell."""

    mapping: str
    features: str
    classifier: str
    trials: tuple[TrialResult, ...]

    @property
    def baseline_accuracies(self) -> np.ndarray:
        return np.array([t.report.baseline_test_accuracy for t in self.trials])

    @property
    def evolved_accuracies(self) -> np.ndarray:
        return np.array([t.report.final_test_accuracy for t in self.trials])

    @property
    def baseline_mean(self) -> float:
        return float(self.baseline_accuracies.mean())

    @property
    def baseline_std(self) -> float:
        return float(self.baseline_accuracies.std())

    @property
    def evolved_mean(self) -> float:
        return float(self.evolved_accuracies.mean())

    @property
    def evolved_std(self) -> float:
        return float(self.evolved_accuracies.std())

    @property
    def relative_improvement(self) -> float:
        if self.baseline_mean == 0:
            return 0.0
        return (self.evolved_mean - self.baseline_mean) / self.baseline_mean


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    dataset: str
    cells: tuple[CellResult, ...]

    def avg_relative_improvement(self, mapping: str) -> float:
        rimps = [c.relative_improvement for c in self.cells if c.mapping == mapping]
        return float(np.mean(rimps)) if rimps else 0.0


def _trial_splits(ds: GraphDataset, cfg: ExperimentConfig) -> list[tuple[int, int, Split, int]]:
    """(repeat, fold, split, trial seed) grid; fold structure varies per repeat."""
    grid = []
    for r in range(cfg.repeats):
        splits = kfold(ds, cfg.folds, seed=derive_seed(cfg.seed, r))
        for f, split in enumerate(splits):
            grid.append((r, f, split, derive_seed(cfg.seed, r, f)))
    return grid


def _run_trial(args) -> tuple[str, str, str, int, int, int, EvolutionReport]:
    ds, cfg, mapping, feature_kind, classifier_kind, repeat, fold, split, trial_seed = args
    evolve_cfg = cfg.evolve_config(mapping, feature_kind, classifier_kind)

    def pick(idx):
        return [ds.graphs[i] for i in idx], [ds.labels[i] for i in idx]

    train_g, train_y = pick(split.train)
    val_g, val_y = pick(split.val)
    test_g, test_y = pick(split.test)
    report, _ = evolve(
        train_g, train_y, val_g, val_y, test_g, test_y,
        n_classes=ds.class_count, cfg=evolve_cfg, seed=trial_seed,
    )
    return mapping, feature_kind, classifier_kind, repeat, fold, trial_seed, report


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def run_experiment(cfg: ExperimentConfig, ds: GraphDataset | None = None) -> ExperimentResult:
    """Run every requested cell over the full (repeat, fold) grid."""
    if ds is None:
        ds = load_tu_dataset(cfg.dataset_dir, cfg.dataset)
    grid = _trial_splits(ds, cfg)
    tasks = [
        (ds, cfg, mapping, feature_kind, classifier_kind, r, f, split, trial_seed)
        for mapping in cfg.mappings
        for feature_kind in cfg.features
        for classifier_kind in cfg.classifiers
        for (r, f, split, trial_seed) in grid
    ]

    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_trial, tasks, chunksize=1))
    else:
        outcomes = [_run_trial(t) for t in tasks]

    cells = []
    per_trial = len(grid)
    for i in range(0, len(outcomes), per_trial):
        chunk = outcomes[i:i + per_trial]
        mapping, feature_kind, classifier_kind = chunk[0][:3]
        trials = tuple(
            TrialResult(repeat=r, fold=f, seed=s, report=rep)
            for _, _, _, r, f, s, rep in chunk
        )
        cells.append(
            CellResult(mapping=mapping, features=feature_kind, classifier=classifier_kind, trials=trials)
        )
    return ExperimentResult(config=cfg, dataset=ds.name, cells=tuple(cells))


def dataset_stats(ds: GraphDataset) -> dict:
    return {
        "dataset": ds.name,
        "graphs": len(ds),
        "classes": ds.class_count,
        "avg_vertices": ds.avg_vertex_count,
        "avg_edges": ds.avg_edge_count,
        "bias_percent": 100.0 * ds.bias,
    }


def result_to_dict(result: ExperimentResult) -> dict:
    """JSON-ready structure with full per-trial detail."""
    config = {
        key: list(value) if isinstance(value, tuple) else value
        for key, value in dataclasses.asdict(result.config).items()
    }
    return {
        "dataset": result.dataset,
        "config": config,
        "cells": [
            {
                "mapping": c.mapping,
                "features": c.features,
                "classifier": c.classifier,
                "baseline_mean": c.baseline_mean,
                "baseline_std": c.baseline_std,
                "evolved_mean": c.evolved_mean,
                "evolved_std": c.evolved_std,
                "relative_improvement": c.relative_improvement,
                "trials": [
                    {
                        "repeat": t.repeat,
                        "fold": t.fold,
                        "seed": t.seed,
                        "baseline_val_accuracy": t.report.baseline_val_accuracy,
                        "baseline_test_accuracy": t.report.baseline_test_accuracy,
                        "final_test_accuracy": t.report.final_test_accuracy,
                        "iterations": [dataclasses.asdict(rec) for rec in t.report.iterations],
                    }
                    for t in c.trials
                ],
            }
            for c in result.cells
        ],
        "avg_relative_improvement": {
            mapping: result.avg_relative_improvement(mapping) for mapping in result.config.mappings
        },
    }


CSV_COLUMNS = [
    "dataset", "mapping", "features", "classifier", "trials",
    "baseline_mean", "baseline_std", "evolved_mean", "evolved_std", "rimp_percent",
]


def emit_reports(result: ExperimentResult, out_path=None, csv_path=None) -> None:
    """Write the hierarchical JSON report and the flat CSV summary.

    The CSV carries one row per cell plus one average-improvement row per
    mapping. Output is a pure function of the result, so repeated runs
    with one configuration emit byte-identical files.
    """
    if out_path is not None:
        out_path = Path(out_path)
        _ensure_parent(out_path)
        out_path.write_text(json.dumps(result_to_dict(result), indent=2, sort_keys=True) + "\n")
    if csv_path is not None:
        csv_path = Path(csv_path)
        _ensure_parent(csv_path)
        with csv_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for c in result.cells:
                writer.writerow([
                    result.dataset, c.mapping, c.features, c.classifier, len(c.trials),
                    f"{c.baseline_mean:.6f}", f"{c.baseline_std:.6f}",
                    f"{c.evolved_mean:.6f}", f"{c.evolved_std:.6f}",
                    f"{100.0 * c.relative_improvement:.4f}",
                ])
            for mapping in result.config.mappings:
                writer.writerow([
                    result.dataset, mapping, "avg", "avg", "",
                    "", "", "", "",
                    f"{100.0 * result.avg_relative_improvement(mapping):.4f}",
                ])


def _ensure_parent(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create directory for {path}: {exc}") from exc
