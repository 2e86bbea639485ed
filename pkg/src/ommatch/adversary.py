"""Star-metric lower-bound adversaries and the harness that plays them.

The star setting has one center and n leaves (center-leaf distance 1,
leaf-leaf distance 2) with a server on every leaf.  Adaptive adversaries
choose each request after seeing the algorithm's previous answers, and answer
the algorithm's prediction queries themselves, so runs here use a local drive
loop instead of a pre-built instance; the realized request sequence is turned
into an Instance afterwards to cross-check the forced offline optimum.

Variants: det-budget (forces ratio >= 2n/(B+1) - 1 under a query budget B),
det-wellsep (forces ratio >= 2k-1 under query separation k), and three
randomized request strategies (plain / budget / wellsep) whose expected costs
follow harmonic-number laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, UsageError
from .harness import Instance
from .metric import MetricSpace

CENTER = 0


def harmonic(n: int) -> float:
    return float(sum(1.0 / i for i in range(1, n + 1)))


def star_space(n: int) -> MetricSpace:
    """Point 0 is the center; points 1..n are the leaves."""
    if n < 1:
        raise UsageError("star needs at least one leaf")
    m = np.full((n + 1, n + 1), 2.0)
    m[0, :] = 1.0
    m[:, 0] = 1.0
    np.fill_diagonal(m, 0.0)
    return MetricSpace(kind="explicit", points=tuple(range(n + 1)), matrix=tuple(map(tuple, m)))


def star_servers(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def budget_schedule_k(n: int, budget: int) -> int:
    """Smallest query separation k whose schedule {k, 2k, ...} fits in budget."""
    if budget <= 0:
        return n + 1
    k = 1
    while n // k > budget:
        k += 1
    return k


@dataclass(frozen=True)
class AdversaryReport:
    variant: str
    n: int
    param: int
    algorithm: str
    trials: int
    mean_cost: float
    mean_opt: float
    mean_ratio: float
    ci95: float
    theory_bound: float
    requests: tuple[int, ...]
    predictions: tuple[tuple[int, tuple[int, ...]], ...]


class _AdversaryOracle:
    """Oracle whose answers are produced by an adversary-supplied closure."""

    def __init__(self, answer, budget: int | None = None):
        self._answer = answer
        self._budget = budget
        self.log: list[tuple[int, float]] = []
        self.queries: list[tuple[int, tuple[int, ...]]] = []

    def reset(self) -> None:
        self.log.clear()
        self.queries.clear()

    def query(self, t: int):
        if self._budget is not None and len(self.queries) >= self._budget:
            raise ContractViolationError(
                f"query budget {self._budget} exhausted before round {t}"
            )
        pred = tuple(sorted(self._answer(t)))
        self.queries.append((t, pred))
        self.log.append((t, 0.0))
        return pred


def _drive(matcher, space, servers, pick_request, n: int, seed) -> tuple[list[int], list[int], float]:
    """Round-by-round loop for adaptive request sequences."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    matcher.init(space, servers, ss)
    requests: list[int] = []
    answers: list[int] = []
    cost = 0.0
    used: set[int] = set()
    for t in range(1, n + 1):
        point = pick_request(t)
        requests.append(point)
        slot = int(matcher.serve(point))
        if slot < 0 or slot >= len(servers) or slot in used:
            raise ContractViolationError(f"invalid or reused server slot {slot} at round {t}")
        used.add(slot)
        answers.append(slot)
        cost += space.distance(point, servers[slot])
    return requests, answers, cost


def _check_opt(space, servers, requests, expected: float, label: str) -> float:
    inst = Instance(space=space, servers=tuple(servers), requests=tuple(requests), label=label)
    opt = inst.opt_ref.cost
    if abs(opt - expected) > 1e-9:
        raise AssertionError(f"{label}: offline optimum {opt} != forced value {expected}")
    return opt


def run_det_budget(alg_factory, n: int, budget: int, seed=0) -> AdversaryReport:
    """Adaptive adversary against a deterministic algorithm holding a query
    budget; every leaf request lands on a server the algorithm already used."""
    space = star_space(n)
    servers = star_servers(n)
    matched: set[int] = set()
    requested: set[int] = set()
    predicted: set[int] = set()
    standing: list[int] = []

    def answer(t: int):
        if standing and standing[0] not in matched:
            p = standing[0]
        else:
            p = min(set(range(n)) - matched)
            standing[:] = [p]
        predicted.add(p)
        return set(matched) | {p}

    oracle = _AdversaryOracle(answer, budget=budget)
    matcher = alg_factory(oracle)

    center_requests = [0]

    def pick(t: int) -> int:
        cand = matched - predicted - requested
        if cand:
            s = min(cand)
            requested.add(s)
            return servers[s]
        center_requests[0] += 1
        return CENTER

    base_serve = matcher.serve

    def serve_and_track(point):
        slot = base_serve(point)
        matched.add(int(slot))
        return slot

    matcher.serve = serve_and_track
    requests, _, cost = _drive(matcher, space, servers, pick, n, seed)
    opt = _check_opt(space, servers, requests, float(center_requests[0]), "det-budget")
    bound = 2.0 * n / (budget + 1) - 1.0
    return AdversaryReport(
        variant="det-budget",
        n=n,
        param=budget,
        algorithm=matcher.name,
        trials=1,
        mean_cost=cost,
        mean_opt=opt,
        mean_ratio=cost / opt,
        ci95=0.0,
        theory_bound=bound,
        requests=tuple(requests),
        predictions=tuple(oracle.queries),
    )


def run_det_wellsep(alg_factory, n: int, k: int, seed=0) -> AdversaryReport:
    """Chases the algorithm's latest match until the first query round, then
    fills untouched leaves, keeping one leaf (the intended center partner)
    request-free so the offline optimum is exactly 1."""
    if not 1 <= k <= n:
        raise UsageError("need 1 <= k <= n")
    space = star_space(n)
    servers = star_servers(n)
    requested: set[int] = set()
    answers_seen: list[int] = []
    lstar: list[int] = []

    def answer(t: int):
        if not lstar:
            lstar.append(max(set(range(n)) - requested))
        return requested | {lstar[0]}

    oracle = _AdversaryOracle(answer)
    matcher = alg_factory(oracle)

    def pick(t: int) -> int:
        if t == 1:
            return CENTER
        if t <= k:
            s = answers_seen[-1]
        else:
            avoid = requested | set(lstar)
            s = min(set(range(n)) - avoid)
        requested.add(s)
        return servers[s]

    base_serve = matcher.serve

    def serve_and_track(point):
        slot = base_serve(point)
        answers_seen.append(int(slot))
        return slot

    matcher.serve = serve_and_track
    requests, _, cost = _drive(matcher, space, servers, pick, n, seed)
    opt = _check_opt(space, servers, requests, 1.0, "det-wellsep")
    return AdversaryReport(
        variant="det-wellsep",
        n=n,
        param=k,
        algorithm=matcher.name,
        trials=1,
        mean_cost=cost,
        mean_opt=opt,
        mean_ratio=cost / opt,
        ci95=0.0,
        theory_bound=2.0 * k - 1.0,
        requests=tuple(requests),
        predictions=tuple(oracle.queries),
    )


def _rand_trial(alg_factory, n: int, variant: str, param: int, trial_seed) -> tuple[float, float, list[int], list]:
    space = star_space(n)
    servers = star_servers(n)
    adv_ss, alg_ss = trial_seed.spawn(2)
    rng = np.random.default_rng(adv_ss)

    requested: set[int] = set()
    reserved: list[int] = []
    center_count = [0]
    restart = [False]
    warmup = n - param if variant == "rand-wellsep" else 0

    def blocked() -> set[int]:
        return requested | set(reserved)

    def answer(t: int):
        leaf_slots = set(requested)
        while len(reserved) < center_count[0]:
            free = min(set(range(n)) - leaf_slots - set(reserved))
            reserved.append(free)
        if variant == "rand-budget":
            restart[0] = True
        pred = leaf_slots | set(reserved)
        if len(pred) != t:
            raise AssertionError(f"adversary prediction has size {len(pred)} at round {t}")
        return pred

    oracle = _AdversaryOracle(answer)
    matcher = alg_factory(oracle)

    def pick(t: int) -> int:
        if variant == "rand-wellsep" and t <= warmup:
            s = min(set(range(n)) - requested)
            requested.add(s)
            return servers[s]
        if (
            t == 1
            or (variant == "rand-wellsep" and t == warmup + 1)
            or (variant == "rand-budget" and restart[0])
        ):
            restart[0] = False
            center_count[0] += 1
            return CENTER
        avail = sorted(set(range(n)) - blocked())
        s = avail[int(rng.integers(len(avail)))]
        requested.add(s)
        return servers[s]

    requests, _, cost = _drive(matcher, space, servers, pick, n, alg_ss)
    opt = _check_opt(space, servers, requests, float(center_count[0]), variant)
    return cost, opt, requests, list(oracle.queries), matcher.name


def run_rand_star(
    alg_factory, n: int, variant: str, trials: int, seed=0, param: int | None = None
) -> AdversaryReport:
    """Monte Carlo over the randomized star strategies.

    plain: center then uniform unrequested leaves.  budget: plain, restarting
    at the center after every oracle query, with predicted servers treated as
    requested.  wellsep (n a multiple of param k): cost-free leaf warmup, then
    plain on the residual k-leaf star.
    """
    if variant not in ("rand-plain", "rand-budget", "rand-wellsep"):
        raise UsageError(f"unknown variant {variant!r}")
    if trials < 1:
        raise UsageError("trials must be >= 1")
    if variant == "rand-wellsep":
        if param is None or param < 1:
            raise UsageError("rand-wellsep needs the separation k")
        if n % param:
            n = param * math.ceil(n / param)
    if variant == "rand-budget" and param is None:
        raise UsageError("rand-budget needs the budget B")
    eff_param = 0 if param is None else int(param)

    ss = np.random.SeedSequence(seed)
    ratios = []
    costs = []
    opts = []
    last = None
    name = "alg"
    for trial_seed in ss.spawn(trials):
        cost, opt, requests, queries, name = _rand_trial(
            alg_factory, n, variant, eff_param, trial_seed
        )
        costs.append(cost)
        opts.append(opt)
        ratios.append(cost / opt)
        last = (requests, queries)

    if variant == "rand-plain":
        bound = 2.0 * harmonic(n) - 1.0
    elif variant == "rand-budget":
        bound = 1.0 + 2.0 * (harmonic(n) - harmonic(eff_param + 1)) / (eff_param + 1)
    else:
        bound = 2.0 * harmonic(eff_param) - 1.0
    r = np.asarray(ratios)
    ci = 0.0 if trials == 1 else float(1.96 * r.std(ddof=1) / math.sqrt(trials))
    return AdversaryReport(
        variant=variant,
        n=n,
        param=eff_param,
        algorithm=name,
        trials=trials,
        mean_cost=float(np.mean(costs)),
        mean_opt=float(np.mean(opts)),
        mean_ratio=float(r.mean()),
        ci95=ci,
        theory_bound=bound,
        requests=tuple(last[0]),
        predictions=tuple(last[1]),
    )
