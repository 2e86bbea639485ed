"""Exact minimum-cost bipartite matchings and the fixed offline optimum.

The two solver entry points wrap :func:`scipy.optimize.linear_sum_assignment`
(a shortest-augmenting-path assignment solver) behind input validation; the
test suite cross-checks them against exhaustive permutation enumeration.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import UsageError


@dataclass(frozen=True)
class Matching:
    """A bipartite matching as ``(left, right)`` pairs with its total cost."""

    pairs: tuple[tuple[int, int], ...]
    cost: float


def _checked(costs, allow_rect: bool) -> np.ndarray:
    c = np.asarray(costs, dtype=float)
    if c.ndim != 2 or c.shape[0] == 0 or c.shape[1] == 0:
        raise UsageError("cost matrix must be two-dimensional and nonempty")
    if not allow_rect and c.shape[0] != c.shape[1]:
        raise UsageError(f"cost matrix must be square, got {c.shape}")
    if allow_rect and c.shape[0] > c.shape[1]:
        raise UsageError(f"cost matrix must have rows <= columns, got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise UsageError("cost matrix must be finite")
    if np.any(c < 0):
        raise UsageError("cost matrix must be nonnegative")
    return c


def solve_min_cost_perfect(costs) -> Matching:
    """Minimum-cost perfect matching of a square nonnegative cost matrix."""
    c = _checked(costs, allow_rect=False)
    rows, cols = linear_sum_assignment(c)
    return Matching(tuple(zip(rows.tolist(), cols.tolist())), float(c[rows, cols].sum()))


def solve_left_saturating(costs) -> Matching:
    """Minimum-cost matching saturating every row of a rows <= cols matrix."""
    c = _checked(costs, allow_rect=True)
    rows, cols = linear_sum_assignment(c)
    return Matching(tuple(zip(rows.tolist(), cols.tolist())), float(c[rows, cols].sum()))


def constrained_identity_pairs(
    left: Sequence[int],
    right: Sequence[int],
    cost_of: Callable[[Sequence[int], Sequence[int]], np.ndarray],
) -> tuple[list[tuple[int, int]], float]:
    """Match ``left`` to ``right`` pinning equal ids to each other.

    Ids common to both sides are paired identically, one pair per shared
    multiplicity; the residual is matched at minimum cost using the matrix
    returned by ``cost_of(residual_left, residual_right)``.  When the metric
    obeys the triangle inequality this pinned matching is also a global
    minimum-cost matching.

    Returns ``(pairs, cost)`` where pairs hold the original id values.
    """
    if len(left) != len(right):
        raise UsageError("constrained matching requires equal-size sides")
    avail: dict[int, deque[int]] = {}
    for j, rid in enumerate(right):
        avail.setdefault(rid, deque()).append(j)
    pairs: list[tuple[int, int]] = []
    used_right: set[int] = set()
    resid_left: list[int] = []
    for lid in left:
        q = avail.get(lid)
        if q:
            j = q.popleft()
            used_right.add(j)
            pairs.append((lid, right[j]))
        else:
            resid_left.append(lid)
    resid_right = [right[j] for j in range(len(right)) if j not in used_right]
    cost = 0.0
    if resid_left:
        m = np.asarray(cost_of(resid_left, resid_right), dtype=float)
        sol = solve_min_cost_perfect(m)
        for i, j in sol.pairs:
            pairs.append((resid_left[i], resid_right[j]))
        cost = sol.cost
    return pairs, cost


def constrained_identity_matching(space, a, b) -> Matching:
    """Minimum-cost matching between configurations with the shared multiset
    pinned: every point index common to ``a`` and ``b`` (up to multiplicity)
    is matched to itself."""
    from .metric import _as_elements

    ea, eb = _as_elements(a), _as_elements(b)
    if len(ea) != len(eb):
        raise UsageError("configurations must have equal size")
    for x in ea + eb:
        space.check_index(x)
    d = space.pairwise()

    def cost_of(ls, rs):
        return d[np.ix_(ls, rs)]

    pairs, _ = constrained_identity_pairs(ea, eb, cost_of)
    total = sum(space.distance(u, v) for u, v in pairs)
    return Matching(tuple(sorted(pairs)), float(total))


@dataclass(frozen=True)
class OptimalReference:
    """A fixed optimal offline matching and its prefix server sets.

    ``matching`` pairs server slots with request rounds (0-based).
    ``prefix_servers[t-1]`` is the set of server slots matched to the first
    ``t`` requests in this fixed optimum; the sets are nested.
    """

    matching: Matching
    prefix_servers: tuple[frozenset[int], ...]

    @property
    def cost(self) -> float:
        return self.matching.cost

    def server_of_round(self, t: int) -> int:
        """Server slot matched to request ``t`` (1-based) in the optimum."""
        if not 1 <= t <= len(self.prefix_servers):
            raise UsageError(f"round {t} out of range")
        for slot, rnd in self.matching.pairs:
            if rnd == t - 1:
                return slot
        raise AssertionError("optimal matching misses a round")


def offline_opt(instance) -> OptimalReference:
    """Solve the offline problem for an instance and fix one optimal matching.

    Ties between equal-cost optima are broken deterministically by the solver,
    so repeated calls return the same reference.
    """
    d = instance.space.pairwise()
    costs = d[np.ix_(list(instance.servers), list(instance.requests))]
    rows, cols = linear_sum_assignment(costs)
    pairs = sorted(zip(rows.tolist(), cols.tolist()), key=lambda p: p[1])
    total = float(costs[rows, cols].sum())
    by_round = {rnd: slot for slot, rnd in pairs}
    prefix: list[frozenset[int]] = []
    acc: set[int] = set()
    for t in range(len(instance.requests)):
        acc.add(by_round[t])
        prefix.append(frozenset(acc))
    return OptimalReference(Matching(tuple(pairs), total), tuple(prefix))
