"""Shared fixtures and independent brute-force oracles.

The oracles here enumerate permutations directly and are deliberately naive;
library results are validated against them, never the other way around.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from ommatch import Instance, MetricSpace

DATA_DIR = Path(__file__).parent / "data"


@lru_cache(maxsize=16)
def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=int)


def brute_min_perfect(matrix) -> float:
    """Minimum-cost perfect matching by exhaustive permutation search."""
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    assert m.shape == (n, n) and n <= 8
    perms = _perms(n)
    costs = m[np.arange(n)[None, :], perms].sum(axis=1)
    return float(costs.min())


def brute_left_saturating(matrix) -> float:
    """Minimum-cost injection of every row into distinct columns."""
    m = np.asarray(matrix, dtype=float)
    rows, cols = m.shape
    assert rows <= cols and cols <= 8
    best = math.inf
    for assign in itertools.permutations(range(cols), rows):
        best = min(best, sum(m[i, j] for i, j in enumerate(assign)))
    return float(best)


def brute_config_dist(space: MetricSpace, a, b) -> float:
    a = list(a)
    b = list(b)
    assert len(a) == len(b)
    if not a:
        return 0.0
    m = np.array([[space.distance(u, v) for v in b] for u in a])
    return brute_min_perfect(m)


def brute_prefix_opt(space: MetricSpace, server_points, request_points) -> float:
    """Best cost of matching the given requests into distinct servers."""
    m = np.array([[space.distance(r, s) for s in server_points] for r in request_points])
    if m.shape[0] == m.shape[1]:
        return brute_min_perfect(m)
    return brute_left_saturating(m)


def brute_offline(instance: Instance) -> float:
    return brute_prefix_opt(instance.space, list(instance.servers), list(instance.requests))


def random_line_space(rng: np.random.Generator, n: int) -> MetricSpace:
    return MetricSpace(kind="line", points=tuple(float(x) for x in rng.random(n)))


def random_plane_space(rng: np.random.Generator, n: int) -> MetricSpace:
    pts = rng.random((n, 2))
    return MetricSpace(kind="plane", points=tuple((float(x), float(y)) for x, y in pts))


def random_explicit_space(rng: np.random.Generator, n: int) -> MetricSpace:
    """Random metric via shortest-path closure of a random symmetric matrix."""
    raw = rng.uniform(0.1, 1.0, size=(n, n))
    m = (raw + raw.T) / 2.0
    np.fill_diagonal(m, 0.0)
    for k in range(n):
        m = np.minimum(m, m[:, k, None] + m[None, k, :])
    return MetricSpace(kind="explicit", points=tuple(range(n)), matrix=tuple(map(tuple, m)))


def random_space(rng: np.random.Generator, n: int, kind: str | None = None) -> MetricSpace:
    kind = kind or ("line", "plane", "explicit")[int(rng.integers(3))]
    if kind == "line":
        return random_line_space(rng, n)
    if kind == "plane":
        return random_plane_space(rng, n)
    return random_explicit_space(rng, n)


def random_instance(
    rng: np.random.Generator, n_servers: int, kind: str | None = None, extra_points: int = 0
) -> Instance:
    n = 2 * n_servers + extra_points
    space = random_space(rng, n, kind)
    ids = rng.permutation(n)
    servers = tuple(int(i) for i in ids[:n_servers])
    pool = ids[n_servers:]
    requests = tuple(int(pool[int(rng.integers(len(pool)))]) for _ in range(n_servers))
    return Instance(space=space, servers=servers, requests=requests, label=f"rand-{kind}")


@pytest.fixture(scope="session")
def taxi_csv() -> str:
    return str(DATA_DIR / "taxi_fixture.csv")
