#!/usr/bin/env python3
"""Run the query-frequency and noise-sensitivity experiments into one
directory.

Desk scale finishes on a laptop; paper scale reproduces the full figure
inputs and can take hours. Taxi instances need a trip CSV (see README).
"""

from __future__ import annotations

import argparse
import pathlib

from ommatch.experiments import desk_config, paper_config, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scale", choices=("desk", "paper"), default="desk")
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--taxi-csv", default=None, help="trip CSV enabling the taxi class")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    classes = ("line", "plane") + (("taxi",) if args.taxi_csv else ())
    base = desk_config if args.scale == "desk" else paper_config

    for exp in ("exp1", "exp2"):
        cfg = base(
            experiment=exp,
            classes=classes,
            seed=args.seed,
            jobs=args.jobs,
            taxi_csv=args.taxi_csv,
            out=str(out / f"{exp}.csv"),
        )
        path = run_experiment(cfg)
        print(f"{exp}: wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
