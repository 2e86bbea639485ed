"""Experiment harness: batch runs over generated instances, CSV emission.

Two experiment families mirror the benchmark protocol: exp1 sweeps the query
separation k under perfect predictions and reports cost/opt ratios per
(class, instance, k, algorithm); exp2 fixes instances and sweeps a noise
radius grid, drawing fresh noisy prediction sequences per radius.  A third
family replays the lower-bound adversaries, and embed-check samples random
tree embeddings for distortion statistics.

Determinism: every run's seed derives from an entropy tuple (base seed plus
structural indices), so results are independent of execution order and the
CSV bytes are reproducible; rows are sorted before writing.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import adversary as adv
from . import harness, instances
from .combiner import CombinerMatcher, rescale_for_combination
from .errors import UsageError
from .hst import EmbeddedBbgnMatcher, frt_embed
from .metric import noise_scale_stats
from .netcost import GreedyMatcher, NetCostMatcher
from .parsimonious import ParsimoniousMatcher
from .predictions import NoisyOracle, PerfectOracle, noise_radius_grid

ALGORITHMS = ("ours", "comp", "comb-comp", "greedy", "comb-greedy", "bbgn", "ours-rand")
K_DEPENDENT = frozenset({"ours", "comb-comp", "comb-greedy", "ours-rand"})
PREDICTION_USERS = K_DEPENDENT
COMBINERS = frozenset({"comb-comp", "comb-greedy"})
CLASSES = ("line", "plane", "taxi")
EXPERIMENTS = ("exp1", "exp2", "adversary", "embed-check")

EXP1_COLUMNS = (
    "experiment", "class", "instance_id", "seed", "k", "algorithm",
    "cost", "opt_cost", "ratio",
)
EXP2_COLUMNS = EXP1_COLUMNS + ("noise_radius", "noise_norm", "prediction_id", "eta_Q")
ADVERSARY_COLUMNS = (
    "variant", "n", "param", "algorithm", "trials", "mean_ratio", "theory_bound", "pass",
)
EMBED_COLUMNS = (
    "class", "trial", "n_points", "dominance_ok", "mean_distortion", "max_distortion",
)

_EXP_TAG = {"exp1": 1, "exp2": 2, "adversary": 3, "embed-check": 4}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    classes: tuple[str, ...] = CLASSES
    algorithms: tuple[str, ...] = ("ours", "comp", "comb-comp", "greedy", "comb-greedy")
    k_values: tuple[int, ...] = tuple(range(1, 21))
    n_instances: int = 20
    n_predictions: int = 20
    n_radii: int = 10
    trials: int = 10_000
    seed: int = 0
    out: str = "results.csv"
    jobs: int = 1
    taxi_csv: str | None = None
    taxi_date: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise UsageError(f"unknown experiment {self.experiment!r}")
        bad = [c for c in self.classes if c not in CLASSES]
        if bad:
            raise UsageError(f"unknown instance classes {bad}")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise UsageError(f"unknown algorithms {bad}")
        if any(k < 1 for k in self.k_values):
            raise UsageError("k values must be >= 1")
        if min(self.n_instances, self.n_predictions, self.n_radii, self.trials) < 1:
            raise UsageError("replicate counts must be >= 1")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")


def desk_config(experiment: str, **overrides) -> ExperimentConfig:
    base = dict(experiment=experiment)
    if experiment == "exp2":
        base.update(n_instances=1, n_predictions=20, n_radii=10, k_values=(1, 5, 10, 20))
    base.update(overrides)
    return ExperimentConfig(**base)


def paper_config(experiment: str, **overrides) -> ExperimentConfig:
    base = dict(experiment=experiment, n_instances=100)
    if experiment == "exp2":
        base.update(n_instances=5, n_predictions=100, n_radii=50, k_values=tuple(range(1, 21)))
    base.update(overrides)
    return ExperimentConfig(**base)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: str, columns, rows) -> str:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _gen_instance(klass: str, class_idx: int, inst_id: int, config: ExperimentConfig):
    gc = instances.GenConfig(
        klass=klass,
        seed=inst_id,
        csv_path=config.taxi_csv,
        date=config.taxi_date,
    )
    rng = np.random.default_rng(
        np.random.SeedSequence((config.seed, _EXP_TAG[config.experiment], class_idx, inst_id))
    )
    inst = instances.generate(gc, rng=rng)
    inst.space.pairwise()
    inst.opt_ref  # noqa: B018  (materialize before threads share it)
    return inst


def _run_seed(config: ExperimentConfig, *indices: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((config.seed, _EXP_TAG[config.experiment], 7, *indices))


def make_matcher(alg: str, k: int, oracle_factory):
    """oracle_factory(tag) -> fresh oracle bound to the run's instance; tag
    keeps sub-algorithm oracles on distinct rng streams."""
    if alg == "ours":
        return ParsimoniousMatcher(k=k, oracle=oracle_factory(0), name="ours")
    if alg == "ours-rand":
        return ParsimoniousMatcher(
            k=k, oracle=oracle_factory(0), preset_name="general-randomized", name="ours-rand"
        )
    if alg == "comp":
        return NetCostMatcher(gamma=1.0, name="comp")
    if alg == "greedy":
        return GreedyMatcher()
    if alg == "bbgn":
        return EmbeddedBbgnMatcher()
    if alg == "comb-comp":
        return CombinerMatcher(
            make_a=lambda: ParsimoniousMatcher(k=k, oracle=oracle_factory(0), name="ours"),
            make_b=lambda: NetCostMatcher(gamma=1.0, name="comp"),
            name="comb-comp",
        )
    if alg == "comb-greedy":
        return CombinerMatcher(
            make_a=lambda: ParsimoniousMatcher(k=k, oracle=oracle_factory(0), name="ours"),
            make_b=GreedyMatcher,
            name="comb-greedy",
        )
    raise UsageError(f"unknown algorithm {alg!r}")


def _execute(tasks, jobs: int):
    if jobs <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


def _run_one(config, inst, alg: str, k: int, oracle_factory, seed):
    """Returns (cost, opt, ratio, eta) in the original instance's units."""
    if alg in COMBINERS:
        run_inst, factor = rescale_for_combination(inst)
        run_inst.space.pairwise()
    else:
        run_inst, factor = inst, 1.0
    matcher = make_matcher(alg, k, lambda tag: oracle_factory(run_inst, factor, tag))
    transcript = harness.run(matcher, run_inst, seed)
    cost = transcript.total_cost / factor
    opt = inst.opt_ref.cost
    return cost, opt, cost / opt, transcript.eta() / factor


def run_exp1(config: ExperimentConfig) -> str:
    rows = []
    tasks = []

    def perfect_factory(run_inst, factor, tag):
        return PerfectOracle(run_inst)

    for class_idx, klass in enumerate(sorted(set(config.classes))):
        for inst_id in range(config.n_instances):
            inst = _gen_instance(klass, class_idx, inst_id, config)
            if inst.opt_ref.cost <= 0:
                continue
            for alg in config.algorithms:
                alg_idx = ALGORITHMS.index(alg)
                ks = tuple(sorted(set(config.k_values))) if alg in K_DEPENDENT else (0,)
                for k in ks:

                    def task(klass=klass, inst=inst, inst_id=inst_id, alg=alg, k=k,
                             seed=_run_seed(config, class_idx, inst_id, alg_idx, k)):
                        cost, opt, ratio, _ = _run_one(
                            config, inst, alg, max(k, 1), perfect_factory, seed
                        )
                        if k == 0:
                            return [
                                ("exp1", klass, inst_id, config.seed, kk, alg, cost, opt, ratio)
                                for kk in sorted(set(config.k_values))
                            ]
                        return [("exp1", klass, inst_id, config.seed, k, alg, cost, opt, ratio)]

                    tasks.append(task)
    for chunk in _execute(tasks, config.jobs):
        rows.extend(chunk)
    rows.sort(key=lambda r: (r[1], r[2], r[4], r[5]))
    return write_csv(config.out, EXP1_COLUMNS, rows)


def run_exp2(config: ExperimentConfig) -> str:
    rows = []
    tasks = []
    for class_idx, klass in enumerate(sorted(set(config.classes))):
        for inst_id in range(config.n_instances):
            inst = _gen_instance(klass, class_idx, inst_id, config)
            if inst.opt_ref.cost <= 0:
                continue
            d_min, d_med = noise_scale_stats(inst.space)
            radii = noise_radius_grid(inst.space, count=config.n_radii)
            span = d_med - d_min
            for alg in config.algorithms:
                alg_idx = ALGORITHMS.index(alg)
                if alg not in PREDICTION_USERS:
                    seed = _run_seed(config, class_idx, inst_id, alg_idx)

                    def task(klass=klass, inst=inst, inst_id=inst_id, alg=alg, seed=seed,
                             radii=radii, d_min=d_min, span=span):
                        cost, opt, ratio, _ = _run_one(
                            config, inst, alg, 1, lambda *a: None, seed
                        )
                        return [
                            ("exp2", klass, inst_id, config.seed, k, alg, cost, opt, ratio,
                             float(r), (float(r) - d_min) / span if span else 0.0, pid, 0.0)
                            for k in sorted(set(config.k_values))
                            for r in radii
                            for pid in range(config.n_predictions)
                        ]

                    tasks.append(task)
                    continue
                for r_idx, radius in enumerate(radii):
                    for pid in range(config.n_predictions):
                        for k in sorted(set(config.k_values)):

                            def task(klass=klass, inst=inst, inst_id=inst_id, alg=alg,
                                     radius=float(radius), r_idx=r_idx, pid=pid, k=k,
                                     d_min=d_min, span=span,
                                     seed=_run_seed(config, class_idx, inst_id, alg_idx,
                                                    r_idx, pid, k),
                                     oseed=(config.seed, _EXP_TAG["exp2"], 11, class_idx,
                                            inst_id, r_idx, pid)):
                                def oracle_factory(run_inst, factor, tag):
                                    return NoisyOracle(
                                        run_inst,
                                        radius=radius * factor,
                                        seed=np.random.SeedSequence((*oseed, tag)),
                                    )

                                cost, opt, ratio, eta = _run_one(
                                    config, inst, alg, k, oracle_factory, seed
                                )
                                norm = (radius - d_min) / span if span else 0.0
                                return [
                                    ("exp2", klass, inst_id, config.seed, k, alg, cost, opt,
                                     ratio, radius, norm, pid, eta)
                                ]

                            tasks.append(task)
    for chunk in _execute(tasks, config.jobs):
        rows.extend(chunk)
    rows.sort(key=lambda r: (r[1], r[2], r[4], r[5], r[9], r[11]))
    return write_csv(config.out, EXP2_COLUMNS, rows)


def _adversary_factory(alg: str, n: int, variant: str, param: int):
    if alg == "greedy":
        return lambda oracle: GreedyMatcher()
    if alg == "comp":
        return lambda oracle: NetCostMatcher(gamma=1.0, name="comp")
    if alg == "ours":
        if variant in ("det-budget", "rand-budget"):
            k = adv.budget_schedule_k(n, param)
        else:
            k = max(param, 1)
        return lambda oracle: ParsimoniousMatcher(k=k, oracle=oracle, name="ours")
    raise UsageError(f"adversary harness has no factory for {alg!r}")


ADVERSARY_MATRIX = (
    ("det-budget", 8, 0, ("comp", "ours")),
    ("det-budget", 8, 1, ("comp", "ours")),
    ("det-budget", 16, 3, ("comp", "ours")),
    ("det-wellsep", 16, 4, ("comp", "ours")),
    ("det-wellsep", 20, 5, ("comp", "ours")),
    ("rand-plain", 4, 0, ("greedy",)),
    ("rand-plain", 8, 0, ("greedy",)),
    ("rand-plain", 16, 0, ("greedy",)),
)


def run_adversary(config: ExperimentConfig) -> str:
    rows = []
    for variant, n, param, algs in ADVERSARY_MATRIX:
        for alg in algs:
            factory = _adversary_factory(alg, n, variant, param)
            if variant == "det-budget":
                report = adv.run_det_budget(factory, n, param, seed=config.seed)
                slack = 1e-9
            elif variant == "det-wellsep":
                report = adv.run_det_wellsep(factory, n, param, seed=config.seed)
                slack = 1e-9
            else:
                report = adv.run_rand_star(
                    factory, n, variant, trials=config.trials, seed=config.seed, param=param
                )
                slack = max(3.0 * report.ci95, 0.05 * report.theory_bound)
            rows.append(
                (
                    variant, n, param, alg, report.trials, report.mean_ratio,
                    report.theory_bound, report.mean_ratio >= report.theory_bound - slack,
                )
            )
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    return write_csv(config.out, ADVERSARY_COLUMNS, rows)


def run_embed_check(config: ExperimentConfig, n_points: int = 32, n_embeddings: int = 200) -> str:
    rows = []
    for class_idx, klass in enumerate(sorted(set(config.classes))):
        if klass == "taxi" and config.taxi_csv is None:
            continue
        gc = instances.GenConfig(
            klass=klass, csv_path=config.taxi_csv, date=config.taxi_date, seed=0
        )
        inst = instances.generate(
            gc, rng=np.random.default_rng(np.random.SeedSequence((config.seed, 4, class_idx)))
        )
        pts = list(dict.fromkeys(inst.servers))[:n_points]
        d = inst.space.pairwise()[np.ix_(pts, pts)]
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, 4, class_idx, 1)))
        for trial in range(n_embeddings):
            tree = frt_embed(inst.space, rng, points=pts)
            leaf = tree.leaf_of_point
            ok = True
            ratios = []
            for i, u in enumerate(pts):
                for j in range(i + 1, len(pts)):
                    dt = tree.leaf_distance(leaf[u], leaf[pts[j]])
                    if dt < d[i, j] - 1e-9:
                        ok = False
                    if d[i, j] > 0:
                        ratios.append(dt / d[i, j])
            rows.append(
                (
                    klass, trial, len(pts), ok,
                    float(np.mean(ratios)) if ratios else 1.0,
                    float(np.max(ratios)) if ratios else 1.0,
                )
            )
    rows.sort(key=lambda r: (r[0], r[1]))
    return write_csv(config.out, EMBED_COLUMNS, rows)


def run_experiment(config: ExperimentConfig) -> str:
    if config.experiment == "exp1":
        return run_exp1(config)
    if config.experiment == "exp2":
        return run_exp2(config)
    if config.experiment == "adversary":
        return run_adversary(config)
    return run_embed_check(config)
