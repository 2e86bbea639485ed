#!/usr/bin/env python3
"""Run the star lower-bound matrix and the tree-embedding check.

Writes adversary.csv (forced ratios vs their theory bounds) and embed.csv
(dominance and distortion per embedding trial).
"""

from __future__ import annotations

import argparse
import pathlib

from ommatch.experiments import desk_config, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--trials", type=int, default=10_000, help="Monte Carlo trials per randomized variant")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for exp, name in (("adversary", "adversary.csv"), ("embed-check", "embed.csv")):
        cfg = desk_config(
            experiment=exp,
            trials=args.trials,
            seed=args.seed,
            out=str(out / name),
        )
        path = run_experiment(cfg)
        print(f"{exp}: wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
