"""Robust combination of two online matchers via phase doubling.

Both sub-algorithms are simulated on every request.  Phases carry thresholds
2^i; phase i follows A when i is odd and B when i is even.  When the followed
algorithm's accumulated cost exceeds the threshold the phase index advances
(possibly several times in one round).  The combiner cannot copy the followed
algorithm's choice outright because their matched sets drifted apart in
earlier phases, so each round it matches the two complements by a pinned
minimum-cost matching and answers with the counterpart of the followed
algorithm's choice.  On instances with offline optimum at least 1 the
combined cost is within a constant factor of the cheaper sub-algorithm.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .assignment import constrained_identity_pairs
from .errors import SkipInstance
from .metric import Configuration, config_dist


class CombinerMatcher:
    """Runs factories ``make_a()``/``make_b()`` side by side and follows one
    per phase.  ``record_exchange`` keeps per-round set-distance diagnostics
    (quadratic-ish; meant for tests, not benchmarks)."""

    def __init__(self, make_a, make_b, name: str = "comb", record_exchange: bool = False):
        self.make_a = make_a
        self.make_b = make_b
        self.name = name
        self.record_exchange = record_exchange

    def init(self, space, servers, rng) -> None:
        ss = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(rng)
        seed_a, seed_b = ss.spawn(2)
        self.space = space
        self.server_points = tuple(int(s) for s in servers)
        self.sub_a = self.make_a()
        self.sub_b = self.make_b()
        self.sub_a.init(space, self.server_points, seed_a)
        self.sub_b.init(space, self.server_points, seed_b)
        self.phase = 1
        self.cost_a = 0.0
        self.cost_b = 0.0
        self.matched: set[int] = set()
        self.matched_a: set[int] = set()
        self.matched_b: set[int] = set()
        self.exchange_log: list[dict] = []

    def matched_servers(self) -> set[int]:
        return set(self.matched)

    def _set_dist(self, slots_x, slots_y) -> float:
        cx = Configuration.of(self.server_points[s] for s in slots_x)
        cy = Configuration.of(self.server_points[s] for s in slots_y)
        return config_dist(self.space, cx, cy)

    def serve(self, request_point: int) -> int:
        prev_a = set(self.matched_a)
        prev_b = set(self.matched_b)
        prev = set(self.matched)

        slot_a = self.sub_a.serve(request_point)
        slot_b = self.sub_b.serve(request_point)
        self.matched_a.add(slot_a)
        self.matched_b.add(slot_b)
        self.cost_a += self.space.distance(request_point, self.server_points[slot_a])
        self.cost_b += self.space.distance(request_point, self.server_points[slot_b])

        def followed():
            return (
                (self.cost_a, prev_a, slot_a)
                if self.phase % 2 == 1
                else (self.cost_b, prev_b, slot_b)
            )

        cost_c, prev_c, slot_c = followed()
        while cost_c > 2.0**self.phase:
            self.phase += 1
            cost_c, prev_c, slot_c = followed()

        n = len(self.server_points)
        left = sorted(set(range(n)) - prev_c)
        right = sorted(set(range(n)) - prev)
        pw = self.space.pairwise()
        pairs, _ = constrained_identity_pairs(
            left,
            right,
            lambda ls, rs: pw[
                np.ix_(
                    [self.server_points[l] for l in ls],
                    [self.server_points[r] for r in rs],
                )
            ],
        )
        slot = next(r for l, r in pairs if l == slot_c)
        self.matched.add(slot)

        if self.record_exchange:
            self.exchange_log.append(
                {
                    "round": len(self.matched),
                    "followed_slot": slot_c,
                    "answer_slot": slot,
                    "edge": self.space.distance(
                        self.server_points[slot], self.server_points[slot_c]
                    ),
                    "dist_before": self._set_dist(prev, prev_c),
                    "dist_after": self._set_dist(self.matched, self.matched_a if self.phase % 2 == 1 else self.matched_b),
                }
            )
        return slot


def rescale_for_combination(instance):
    """Instance with distances scaled so the offline optimum is 1, plus the
    factor applied.  Zero-optimum instances cannot be normalized."""
    opt = instance.opt_ref.cost
    if opt <= 0:
        raise SkipInstance("offline optimum is zero; cannot rescale to opt=1")
    factor = 1.0 / opt
    scaled = dataclasses.replace(instance, space=instance.space.rescaled(factor))
    return scaled, factor
