"""Command line entry point.

Subcommands: gen (emit one instance as JSON), exp1, exp2, adversary,
embed-check (emit CSV).  Experiment settings come from an optional JSON
config file; any flag given on the command line overrides the file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import experiments, instances
from .errors import UsageError

_ALIASES = {
    "k": "k_values",
    "instances": "n_instances",
    "predictions": "n_predictions",
    "radii": "n_radii",
}


def _parse_ints(text: str) -> tuple[int, ...]:
    """Accepts "1,2,5" and inclusive ranges "1:20"."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"could not parse integer list {text!r}")
    return tuple(out)


def _parse_names(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--experiment", help=argparse.SUPPRESS)
    parser.add_argument("--classes", help="comma-separated instance classes")
    parser.add_argument("--algorithms", help="comma-separated algorithm names")
    parser.add_argument("--k", help="k values, e.g. 1,2,5 or 1:20")
    parser.add_argument("--instances", type=int, help="instances per class")
    parser.add_argument("--predictions", type=int, help="noisy predictions per radius")
    parser.add_argument("--radii", type=int, help="noise radius grid size")
    parser.add_argument("--seed", type=int, help="base seed")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials")
    parser.add_argument("--jobs", type=int, help="worker threads")
    parser.add_argument("--taxi-csv", dest="taxi_csv", help="taxi trips CSV path")
    parser.add_argument("--taxi-date", dest="taxi_date", help="taxi target day MM/DD/YYYY")
    parser.add_argument(
        "--scale", choices=("desk", "paper"), default="desk", help="default replicate counts"
    )


def _experiment_config(experiment: str, args: argparse.Namespace) -> experiments.ExperimentConfig:
    base = (
        experiments.paper_config(experiment)
        if args.scale == "paper"
        else experiments.desk_config(experiment)
    )
    values = dataclasses.asdict(base)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise UsageError(f"{args.config}: config must be a JSON object")
        for key, val in doc.items():
            field = _ALIASES.get(key, key)
            if field == "experiment":
                continue
            if field not in values:
                raise UsageError(f"{args.config}: unknown config key {key!r}")
            values[field] = val
    flag_map = {
        "classes": ("classes", _parse_names),
        "algorithms": ("algorithms", _parse_names),
        "k": ("k_values", _parse_ints),
        "instances": ("n_instances", int),
        "predictions": ("n_predictions", int),
        "radii": ("n_radii", int),
        "seed": ("seed", int),
        "out": ("out", str),
        "trials": ("trials", int),
        "jobs": ("jobs", int),
        "taxi_csv": ("taxi_csv", str),
        "taxi_date": ("taxi_date", str),
    }
    for flag, (field, conv) in flag_map.items():
        raw = getattr(args, flag, None)
        if raw is not None:
            values[field] = conv(raw)
    values["experiment"] = experiment
    for key in ("classes", "algorithms", "k_values"):
        values[key] = tuple(values[key])
    return experiments.ExperimentConfig(**values)


def _cmd_gen(args: argparse.Namespace) -> int:
    config = instances.GenConfig(
        klass=args.klass,
        n_vertices=args.vertices,
        n_servers=args.servers,
        n_requests=args.requests,
        seed=args.seed,
        csv_path=args.taxi_csv,
        date=args.taxi_date,
    )
    inst = instances.generate(config, rng=np.random.default_rng(args.seed))
    text = inst.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(args.out)
    else:
        print(text)
    return 0


def _cmd_experiment(experiment: str, args: argparse.Namespace) -> int:
    config = _experiment_config(experiment, args)
    path = experiments.run_experiment(config)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ommatch", description="online metric matching experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate one instance as JSON")
    gen.add_argument("--class", dest="klass", required=True, choices=experiments.CLASSES)
    gen.add_argument("--vertices", type=int, default=200)
    gen.add_argument("--servers", type=int, default=100)
    gen.add_argument("--requests", type=int, default=100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.add_argument("--taxi-csv", dest="taxi_csv")
    gen.add_argument("--taxi-date", dest="taxi_date")
    gen.set_defaults(func=_cmd_gen)

    for name in ("exp1", "exp2", "adversary", "embed-check"):
        p = sub.add_parser(name, help=f"run the {name} family and write CSV")
        _add_common(p)
        p.set_defaults(func=lambda a, name=name: _cmd_experiment(name, a))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
