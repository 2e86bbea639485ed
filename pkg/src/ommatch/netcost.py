"""Prediction-free baselines: greedy and the net-cost matching framework.

The net-cost framework keeps two matchings.  ``M_on`` is the irrevocable
online answer.  ``M_off`` is a maintained offline matching over the same
server set that may be reassigned: each arriving request is absorbed by
augmenting ``M_off`` along the path minimizing the gamma-net-cost
``gamma * (new edge lengths) - (removed edge lengths)``, and the online answer
is the free server at the end of that path.  At ``gamma = 1`` this is the
classic doubling algorithm whose maintained matching is exactly optimal; at
``gamma = 3`` it trades adherence for input-sensitive competitiveness.

Internally the search is a Dijkstra pass over reduced costs
``gamma * d(s, r) - y(s) - y(r)`` with dual weights ``y`` kept feasible:

* ``y(s) + y(r) <= gamma * d(s, r)`` for every server/request pair,
* ``y(s) + y(r) == d(s, r)`` on every ``M_off`` edge,
* ``y == 0`` on unmatched servers and unseen requests,

which also pins ``sum(y) == cost(M_off)``.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError


class GreedyMatcher:
    """Match each request to the nearest free server (lowest slot on ties)."""

    name = "greedy"

    def init(self, space, servers, rng=None) -> None:
        self.space = space
        self.server_points = np.asarray(servers, dtype=int)
        self.free = np.ones(len(servers), dtype=bool)

    def serve(self, request_point: int) -> int:
        if not self.free.any():
            raise UsageError("all servers already matched")
        d = self.space.pairwise()[request_point, self.server_points]
        slots = np.flatnonzero(self.free)
        slot = int(slots[np.argmin(d[slots])])
        self.free[slot] = False
        return slot

    def matched_servers(self) -> set[int]:
        return set(np.flatnonzero(~self.free).tolist())


class NetCostMatcher:
    """Online matcher driven by minimum gamma-net-cost augmentation."""

    def __init__(self, gamma: float = 1.0, name: str | None = None):
        if gamma < 1:
            raise UsageError("gamma must be at least 1")
        self.gamma = float(gamma)
        self.name = name or ("comp" if gamma == 1.0 else f"netcost-g{gamma:g}")

    def init(self, space, servers, rng=None) -> None:
        self.space = space
        self.server_points = np.asarray(servers, dtype=int)
        n = len(servers)
        self.n = n
        self.y_s = np.zeros(n)
        self.y_r: list[float] = []
        self.partner_of_server = np.full(n, -1, dtype=int)
        self.partner_of_request: list[int] = []
        self.rows: list[np.ndarray] = []  # rows[i][slot] = d(request i, server slot)
        self.mon: list[int] = []  # irrevocable answer per round
        self.request_points: list[int] = []

    # -- state inspection -------------------------------------------------

    def matched_servers(self) -> set[int]:
        return set(np.flatnonzero(self.partner_of_server >= 0).tolist())

    def offline_pairs(self) -> list[tuple[int, int]]:
        """Current ``M_off`` as (request index, server slot) pairs."""
        return [(i, s) for i, s in enumerate(self.partner_of_request)]

    def offline_cost(self) -> float:
        """Cost of the maintained offline matching."""
        return float(sum(self.rows[i][s] for i, s in enumerate(self.partner_of_request)))

    maintained_offline_cost = offline_cost

    def dual_values(self) -> tuple[np.ndarray, np.ndarray]:
        return self.y_s.copy(), np.asarray(self.y_r, dtype=float)

    # -- serving ----------------------------------------------------------

    def serve(self, request_point: int) -> int:
        t = len(self.request_points)
        if t >= self.n:
            raise UsageError("all servers already matched")
        self.request_points.append(request_point)
        row = self.space.pairwise()[request_point, self.server_points].astype(float)
        self.rows.append(row)
        self.y_r.append(0.0)
        y_r = np.asarray(self.y_r, dtype=float)

        m = t + 1
        dist_r = np.full(m, np.inf)
        dist_r[t] = 0.0
        dist_s = np.full(self.n, np.inf)
        parent_s = np.full(self.n, -1, dtype=int)
        vis_r = np.zeros(m, dtype=bool)
        vis_s = np.zeros(self.n, dtype=bool)

        for _ in range(m + self.n):
            # deterministic pop: best request first on ties, lowest index first
            br = np.inf if vis_r.all() else dist_r[~vis_r].min()
            bs = np.inf if vis_s.all() else dist_s[~vis_s].min()
            if br <= bs:
                if not np.isfinite(br):
                    break
                i = int(np.flatnonzero(~vis_r & (dist_r == br))[0])
                vis_r[i] = True
                # reduced cost of leaving request i for any non-partner server
                w = self.gamma * self.rows[i] - y_r[i] - self.y_s
                np.maximum(w, 0.0, out=w)
                if i < t:
                    w[self.partner_of_request[i]] = np.inf
                nd = dist_r[i] + w
                improve = ~vis_s & (nd < dist_s)
                dist_s[improve] = nd[improve]
                parent_s[improve] = i
            else:
                if not np.isfinite(bs):
                    break
                s = int(np.flatnonzero(~vis_s & (dist_s == bs))[0])
                vis_s[s] = True
                q = self.partner_of_server[s]
                if q >= 0 and not vis_r[q] and dist_r[q] > dist_s[s]:
                    dist_r[q] = dist_s[s]

        free = self.partner_of_server < 0
        L = dist_s[free].min()
        s_star = int(np.flatnonzero(free & (dist_s == L))[0])

        # capped dual update keeps feasibility for every pair
        self.y_s -= L - np.minimum(dist_s, L)
        y_r += L - np.minimum(dist_r, L)

        # walk the augmenting path back from the free endpoint
        chain: list[tuple[int, int]] = []
        s = s_star
        while True:
            q = int(parent_s[s])
            chain.append((q, s))
            if q == t:
                break
            s = self.partner_of_request[q]
        self.partner_of_request.append(-1)
        for q, s in chain:
            self.partner_of_request[q] = s
            self.partner_of_server[s] = q
            # retighten the new offline edge to y(s) + y(r) == d(s, r)
            y_r[q] = self.rows[q][s] - self.y_s[s]
        self.y_r = y_r.tolist()

        self.mon.append(s_star)
        return s_star
