#!/usr/bin/env python3
"""Regenerate the committed synthetic demo dataset under data/DEMO/."""

import argparse
from pathlib import Path

from graphevolve import make_demo_dataset, save_tu_dataset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=Path(__file__).resolve().parents[1] / "data" / "DEMO")
    parser.add_argument("--per-class", type=int, default=20)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    ds = make_demo_dataset(n_per_class=args.per_class, seed=args.seed)
    save_tu_dataset(ds, args.out_dir)
    print(f"wrote {len(ds)} graphs to {args.out_dir}")


if __name__ == "__main__":
    main()
