"""Command-line interface: dataset stats, augmentation dumps, experiments.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 runtime
failure.
"""

from __future__ import annotations

import argparse
import sys

from .augment import MAPPING_KINDS, AugmentationConfig, augment_pool
from .classifiers import CLASSIFIER_KINDS
from .datasets import GraphDataset, load_tu_dataset, save_tu_dataset
from .errors import ConfigError, DataError, GraphEvolveError
from .experiment import ExperimentConfig, dataset_stats, emit_reports, run_experiment
from .features import FEATURE_KINDS

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that for data errors
        raise ConfigError(message)


def _csv_choices(raw: str, allowed, flag: str) -> tuple[str, ...]:
    values = tuple(v.strip() for v in raw.split(",") if v.strip())
    for v in values:
        if v not in allowed:
            raise ConfigError(f"{flag}: unknown value {v!r}; expected one of {sorted(allowed)}")
    if not values:
        raise ConfigError(f"{flag}: at least one value required")
    return values


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset-dir", required=True, help="directory holding the TU-format files")
    p.add_argument("--dataset", required=True, help="dataset name (file prefix)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphevolve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="print dataset statistics")
    _add_dataset_args(p_stats)

    p_aug = sub.add_parser("augment", help="write augmented graphs in TU format")
    _add_dataset_args(p_aug)
    p_aug.add_argument("--mapping", default="motif-similarity", choices=MAPPING_KINDS)
    p_aug.add_argument("--beta", type=float, default=0.15)
    p_aug.add_argument("--per-graph", type=int, default=1)
    p_aug.add_argument("--similarity-index", default="ra", choices=("ra", "cn"))
    p_aug.add_argument("--seed", type=int, default=0)
    p_aug.add_argument("--out-dir", required=True, help="directory for the augmented TU files")

    p_run = sub.add_parser("run", help="run the full experiment protocol")
    _add_dataset_args(p_run)
    p_run.add_argument("--mapping", default="motif-similarity",
                       help="comma-separated mappings: random, motif-similarity")
    p_run.add_argument("--beta", type=float, default=0.15)
    p_run.add_argument("--iterations", type=int, default=5)
    p_run.add_argument("--per-graph", type=int, default=1)
    p_run.add_argument("--classifier", default="knn",
                       help="comma-separated classifiers: knn, logreg")
    p_run.add_argument("--features", default="spectral",
                       help="comma-separated feature kinds: spectral, heat-trace")
    p_run.add_argument("--dim", type=int, default=128)
    p_run.add_argument("--folds", type=int, default=5)
    p_run.add_argument("--repeats", type=int, default=10)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--similarity-index", default="ra", choices=("ra", "cn"))
    p_run.add_argument("--knn-k", type=int, default=5)
    p_run.add_argument("--learning-rate", type=float, default=0.1)
    p_run.add_argument("--l2", type=float, default=1e-3)
    p_run.add_argument("--max-epochs", type=int, default=2000)
    p_run.add_argument("--out", default=None, help="path for the structured JSON report")
    p_run.add_argument("--csv", default=None, help="path for the flat CSV summary")
    return parser


def cmd_stats(args) -> int:
    ds = load_tu_dataset(args.dataset_dir, args.dataset)
    stats = dataset_stats(ds)
    print(f"dataset: {stats['dataset']}")
    print(f"graphs: {stats['graphs']}")
    print(f"classes: {stats['classes']}")
    print(f"avg_vertices: {stats['avg_vertices']:.4f}")
    print(f"avg_edges: {stats['avg_edges']:.4f}")
    print(f"bias: {stats['bias_percent']:.2f}%")
    return EXIT_OK


def cmd_augment(args) -> int:
    ds = load_tu_dataset(args.dataset_dir, args.dataset)
    cfg = AugmentationConfig(
        mapping=args.mapping, beta=args.beta, similarity_index=args.similarity_index
    )
    pool, stats = augment_pool(ds.graphs, ds.labels, cfg, per_graph=args.per_graph, seed=args.seed)
    if not pool:
        print("no graph produced an augmented variant", file=sys.stderr)
        return EXIT_RUNTIME
    augmented = GraphDataset(
        name=f"{ds.name}_aug",
        graphs=tuple(g for g, _ in pool),
        labels=tuple(y for _, y in pool),
        label_vocab=ds.label_vocab,
    )
    save_tu_dataset(augmented, args.out_dir)
    print(f"augmented: {stats.produced}/{stats.attempted} variants "
          f"({stats.failed} failed) -> {args.out_dir}/{augmented.name}_*.txt")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = ExperimentConfig(
        dataset_dir=args.dataset_dir,
        dataset=args.dataset,
        mappings=_csv_choices(args.mapping, set(MAPPING_KINDS), "--mapping"),
        features=_csv_choices(args.features, set(FEATURE_KINDS), "--features"),
        classifiers=_csv_choices(args.classifier, CLASSIFIER_KINDS, "--classifier"),
        beta=args.beta,
        iterations=args.iterations,
        per_graph=args.per_graph,
        dim=args.dim,
        folds=args.folds,
        repeats=args.repeats,
        seed=args.seed,
        similarity_index=args.similarity_index,
        knn_k=args.knn_k,
        learning_rate=args.learning_rate,
        l2=args.l2,
        max_epochs=args.max_epochs,
    )
    result = run_experiment(cfg)
    emit_reports(result, out_path=args.out, csv_path=args.csv)
    header = f"{'mapping':<18} {'features':<12} {'classifier':<10} " \
             f"{'baseline':>9} {'evolved':>9} {'rimp':>8}"
    print(header)
    for cell in result.cells:
        print(
            f"{cell.mapping:<18} {cell.features:<12} {cell.classifier:<10} "
            f"{cell.baseline_mean:>9.4f} {cell.evolved_mean:>9.4f} "
            f"{100.0 * cell.relative_improvement:>7.2f}%"
        )
    for mapping in cfg.mappings:
        print(f"avg rimp [{mapping}]: {100.0 * result.avg_relative_improvement(mapping):.2f}%")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "stats":
            return cmd_stats(args)
        if args.command == "augment":
            return cmd_augment(args)
        return cmd_run(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GraphEvolveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
