"""Follow-the-prediction: serve each request where the prediction moved.

Round ``t`` sees a prediction ``P_t`` of ``t`` server slots.  Two constrained
matchings translate the prediction's movement into a feasible server:

* ``mu1`` matches ``P_t`` against ``P_{t-1} + {r_t}`` with every slot common
  to both sides pinned to itself; the partner ``p_t`` of the request is a
  newly predicted slot.
* ``mu2`` matches the unpredicted slots ``S - P_{t-1}`` against the free
  slots ``S - S_{t-1}``, again pinning common slots; the partner ``s_t`` of
  ``p_t`` is free and becomes the answer.

Pinning the shared part loses nothing in a metric, so the cost of ``mu1``
equals the configuration distance between ``P_t`` and ``P_{t-1} + {r_t}``;
summing those distances bounds the total online cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import constrained_identity_pairs
from .errors import UsageError

_REQ = -1  # sentinel id for the current request inside mu1


@dataclass
class FtpState:
    space: object
    server_points: np.ndarray
    server_dist: np.ndarray  # slot x slot distances
    prev_prediction: frozenset[int] = frozenset()
    matched: set[int] = field(default_factory=set)
    t: int = 0


def make_state(space, servers) -> FtpState:
    sp = np.asarray(servers, dtype=int)
    d = space.pairwise()
    return FtpState(space=space, server_points=sp, server_dist=d[np.ix_(sp, sp)])


def ftp_step(state: FtpState, request_point: int, prediction) -> tuple[int, float]:
    """Advance one round; returns ``(server slot, cost of mu1)``."""
    t = state.t + 1
    pred = sorted(int(s) for s in prediction)
    n = len(state.server_points)
    if len(pred) != t or len(set(pred)) != t:
        raise UsageError(f"round {t} needs {t} distinct predicted slots, got {pred}")
    if any(not 0 <= s < n for s in pred):
        raise UsageError("predicted slot out of range")

    req_row = state.space.pairwise()[request_point, state.server_points]

    def cost_of(ls, rs):
        # ids are slots, with _REQ standing for the request location
        out = np.empty((len(ls), len(rs)))
        for j, rid in enumerate(rs):
            out[:, j] = req_row[ls] if rid == _REQ else state.server_dist[ls, rid]
        return out

    left1 = pred
    right1 = sorted(state.prev_prediction) + [_REQ]
    pairs1, mu1_cost = constrained_identity_pairs(left1, right1, cost_of)
    p_t = next(l for l, r in pairs1 if r == _REQ)

    left2 = sorted(set(range(n)) - state.prev_prediction)
    right2 = sorted(set(range(n)) - state.matched)
    pairs2, _ = constrained_identity_pairs(left2, right2, cost_of)
    s_t = next(r for l, r in pairs2 if l == p_t)

    state.prev_prediction = frozenset(pred)
    state.matched.add(s_t)
    state.t = t
    return s_t, float(mu1_cost)


class FtpMatcher:
    """Online matcher that queries its oracle every round."""

    def __init__(self, oracle, name: str = "ftp"):
        self.oracle = oracle
        self.name = name

    def init(self, space, servers, rng=None) -> None:
        self.state = make_state(space, servers)
        self.oracle.reset()
        self.mu1_costs: list[float] = []
        self.predictions: list[frozenset[int]] = []

    def serve(self, request_point: int) -> int:
        t = self.state.t + 1
        pred = self.oracle.query(t)
        slot, mu1 = ftp_step(self.state, request_point, pred)
        self.mu1_costs.append(mu1)
        self.predictions.append(frozenset(pred))
        return slot

    def matched_servers(self) -> set[int]:
        return set(self.state.matched)

    def query_log(self) -> list[tuple[int, float]]:
        return list(self.oracle.log)
