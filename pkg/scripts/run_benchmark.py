#!/usr/bin/env python3
"""Run the full cross-validation protocol on a TU-format benchmark dataset.

Defaults mirror the reference protocol: 5-fold cross validation repeated
10 times, beta = 0.15, T = 5 evolution iterations, feature dimension 128,
both mappings and all four (feature, classifier) cells. Results land in
results/<dataset>/.

Example:
    python3 scripts/run_benchmark.py --data-root data --dataset MUTAG
"""

import argparse
import sys
from pathlib import Path

from graphevolve.cli import main as cli_main

REPO_ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-root", default=REPO_ROOT / "data",
                        help="directory containing <dataset>/<dataset>_*.txt")
    parser.add_argument("--dataset", default="MUTAG")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--repeats", type=int, default=10)
    parser.add_argument("--iterations", type=int, default=5)
    parser.add_argument("--out-dir", default=None)
    args = parser.parse_args()

    out_dir = Path(args.out_dir) if args.out_dir else REPO_ROOT / "results" / args.dataset
    return cli_main([
        "run",
        "--dataset-dir", str(Path(args.data_root) / args.dataset),
        "--dataset", args.dataset,
        "--mapping", "random,motif-similarity",
        "--features", "spectral,heat-trace",
        "--classifier", "knn,logreg",
        "--beta", "0.15",
        "--iterations", str(args.iterations),
        "--folds", "5",
        "--repeats", str(args.repeats),
        "--dim", "128",
        "--seed", str(args.seed),
        "--out", str(out_dir / "report.json"),
        "--csv", str(out_dir / "summary.csv"),
    ])


if __name__ == "__main__":
    sys.exit(main())
