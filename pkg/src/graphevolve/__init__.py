"""Edge-rewiring graph augmentation with label-reliability filtering.

A small library plus experiment harness for enhancing topology-based
graph classifiers on small benchmark datasets: augment the training set
by structure-preserving edge rewiring, keep only augmented graphs whose
predicted class profile matches their inherited label, retrain, repeat.
"""

from .augment import (
    AugmentationConfig,
    augment_pool,
    motif_similarity_mapping,
    random_mapping,
)
from .classifiers import ClassifierConfig, KnnClassifier, LogisticRegression, accuracy, fit
from .datasets import GraphDataset, Split, kfold, load_tu_dataset, save_tu_dataset, stratified_split
from .evolve import (
    ConfusionMatrix,
    EvolutionReport,
    EvolveConfig,
    confusion_matrix,
    evolve,
    filter_pool,
    find_threshold,
    label_reliability,
)
from .experiment import ExperimentConfig, dataset_stats, emit_reports, run_experiment
from .features import FeatureConfig, heat_trace_features, spectral_features
from .graph import EdgeEdit, Graph
from .similarity import (
    WeightedCandidates,
    addition_weights,
    cn_score,
    deletion_weights,
    ra_score,
    score_matrix,
    weighted_sample_without_replacement,
)
from .synthetic import make_demo_dataset

__version__ = "0.1.0"

__all__ = [
    "AugmentationConfig",
    "ClassifierConfig",
    "ConfusionMatrix",
    "EdgeEdit",
    "EvolutionReport",
    "EvolveConfig",
    "ExperimentConfig",
    "FeatureConfig",
    "Graph",
    "GraphDataset",
    "KnnClassifier",
    "LogisticRegression",
    "Split",
    "WeightedCandidates",
    "accuracy",
    "addition_weights",
    "augment_pool",
    "cn_score",
    "confusion_matrix",
    "dataset_stats",
    "deletion_weights",
    "emit_reports",
    "evolve",
    "filter_pool",
    "find_threshold",
    "fit",
    "heat_trace_features",
    "kfold",
    "label_reliability",
    "load_tu_dataset",
    "make_demo_dataset",
    "motif_similarity_mapping",
    "ra_score",
    "random_mapping",
    "run_experiment",
    "save_tu_dataset",
    "score_matrix",
    "spectral_features",
    "stratified_split",
    "weighted_sample_without_replacement",
]
