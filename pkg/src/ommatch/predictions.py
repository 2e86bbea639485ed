"""Action-prediction oracles.

A prediction for round ``t`` is a set of ``t`` distinct server slots that
estimates which servers a fixed offline optimum uses for the first ``t``
requests.  The per-query error is the configuration distance between the
predicted slots' locations and the optimum's; summing it over the rounds an
algorithm actually queried gives the error term its guarantees pay for.

The noisy oracle perturbs each optimal server independently to a uniformly
random server within a radius, then de-duplicates the resulting multiset by
min-cost matching it back into the server set, which keeps the error within
``2 * t * radius``.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError
from .metric import config_dist, noise_scale_stats


def prediction_error(instance, t: int, slots) -> float:
    """Configuration distance between predicted and optimal server locations."""
    slots = sorted(slots)
    if len(slots) != t:
        raise UsageError(f"prediction for round {t} must have {t} servers, got {len(slots)}")
    opt_slots = sorted(instance.opt_ref.prefix_servers[t - 1])
    pts = instance.servers
    return config_dist(instance.space, [pts[s] for s in slots], [pts[s] for s in opt_slots])


class PerfectOracle:
    """Reports the fixed offline optimum's prefix server sets verbatim."""

    def __init__(self, instance):
        self.instance = instance
        self.log: list[tuple[int, float]] = []

    def reset(self) -> None:
        self.log = []

    def query(self, t: int) -> set[int]:
        if not 1 <= t <= self.instance.n:
            raise UsageError(f"query round {t} out of range")
        slots = set(self.instance.opt_ref.prefix_servers[t - 1])
        self.log.append((t, 0.0))
        return slots


class NoisyOracle:
    """Perturbs each optimal server within ``radius`` and de-duplicates.

    Each query draws fresh noise from the oracle's own random stream;
    ``reset`` rewinds the stream so a rerun of the same oracle reproduces the
    same predictions.
    """

    def __init__(self, instance, radius: float, seed: int | np.random.SeedSequence = 0):
        if radius < 0:
            raise UsageError("radius must be nonnegative")
        self.instance = instance
        self.radius = float(radius)
        self._seed = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        pts = list(instance.servers)
        d = instance.space.pairwise()
        self._server_dist = d[np.ix_(pts, pts)]
        self.reset()

    def reset(self) -> None:
        self.rng = np.random.default_rng(self._seed)
        self.log = []

    def query(self, t: int) -> set[int]:
        if not 1 <= t <= self.instance.n:
            raise UsageError(f"query round {t} out of range")
        opt_slots = sorted(self.instance.opt_ref.prefix_servers[t - 1])
        drawn = []
        for s in opt_slots:
            candidates = np.flatnonzero(self._server_dist[s] <= self.radius)
            drawn.append(int(candidates[self.rng.integers(len(candidates))]))
        # de-duplicate: min-cost matching of the drawn multiset into the servers
        from .assignment import solve_left_saturating

        sol = solve_left_saturating(self._server_dist[drawn, :])
        slots = {int(col) for _, col in sol.pairs}
        assert len(slots) == t
        eta = prediction_error(self.instance, t, slots)
        self.log.append((t, eta))
        return slots


def noise_radius_grid(space, count: int = 50) -> np.ndarray:
    """Uniform grid of noise radii spanning [d_min, d_med] of the space."""
    if count < 1:
        raise UsageError("grid needs at least one radius")
    d_min, d_med = noise_scale_stats(space)
    if count == 1:
        return np.asarray([d_min])
    return np.linspace(d_min, d_med, count)


def noise_norm(space, radius: float) -> float:
    """Position of ``radius`` inside the [d_min, d_med] grid, in [0, 1]."""
    d_min, d_med = noise_scale_stats(space)
    if d_med == d_min:
        return 0.0
    return (radius - d_min) / (d_med - d_min)
