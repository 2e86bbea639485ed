"""Meta-algorithm: follow-the-prediction with parsimonious oracle access.

The oracle is consulted only every ``k``-th round.  Between queries the
algorithm manufactures virtual predictions from an auxiliary online matcher A
that runs on the servers left unpredicted by the last query: the virtual
prediction is the last queried set union the servers A has matched in the
current phase.  Every round is then answered by the follow-the-prediction
step on the constructed prediction, so the answer quality degrades gracefully
with both the query separation and the oracle's error on queried rounds.
"""

from __future__ import annotations

import numpy as np

from . import ftp
from .errors import ContractViolationError, UsageError
from .hst import BbgnMatcher, frt_embed
from .netcost import NetCostMatcher

PRESET_NAMES = ("det-general", "det-general-3", "line", "hst-2", "general-randomized")


def _binder(preset_name: str):
    """Returns bind(space, servers, embed_seed) -> zero-arg factory of fresh,
    uninitialized subroutine matchers."""
    if preset_name == "det-general":
        return lambda space, servers, embed_seed: (lambda: NetCostMatcher(gamma=1.0))
    if preset_name == "det-general-3":
        return lambda space, servers, embed_seed: (lambda: NetCostMatcher(gamma=3.0))
    if preset_name == "line":

        def bind_line(space, servers, embed_seed):
            if space.kind != "line":
                raise UsageError("preset 'line' requires a line metric")
            return lambda: NetCostMatcher(gamma=3.0)

        return bind_line
    if preset_name == "hst-2":

        def bind_hst(space, servers, embed_seed):
            if space.kind != "hst":
                raise UsageError("preset 'hst-2' requires an hst metric")
            return lambda: BbgnMatcher()

        return bind_hst
    if preset_name == "general-randomized":

        def bind_rand(space, servers, embed_seed):
            tree = frt_embed(space, np.random.default_rng(embed_seed), points=servers)
            return lambda: BbgnMatcher(tree=tree)

        return bind_rand
    raise UsageError(f"unknown preset {preset_name!r}; expected one of {PRESET_NAMES}")


class ParsimoniousMatcher:
    """Online matcher querying ``oracle`` at rounds {k, 2k, ...}.

    ``preset_name`` selects the virtual-prediction subroutine.  The oracle
    must be bound to the instance being run; ``init`` resets it.
    """

    def __init__(self, k: int, oracle, preset_name: str = "det-general", name: str = "ours"):
        if k < 1:
            raise UsageError("query separation k must be >= 1")
        self.k = int(k)
        self.oracle = oracle
        self.preset_name = preset_name
        self._bind = _binder(preset_name)
        self.name = name

    def init(self, space, servers, rng) -> None:
        ss = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(rng)
        self._ss = ss
        self.space = space
        self.server_points = tuple(int(s) for s in servers)
        self.n = len(self.server_points)
        self._fresh = self._bind(space, self.server_points, ss.spawn(1)[0])
        self.state = ftp.make_state(space, self.server_points)
        self.oracle.reset()
        self.t = 0
        self.anchor: frozenset[int] = frozenset()
        self.query_rounds: list[int] = []
        self.mu1_costs: list[float] = []
        self.predictions: list[frozenset[int]] = []
        self._start_subroutine()

    def _start_subroutine(self) -> None:
        self.sub_slots = sorted(set(range(self.n)) - self.anchor)
        self.sub = self._fresh()
        self.sub.init(
            self.space,
            [self.server_points[s] for s in self.sub_slots],
            self._ss.spawn(1)[0],
        )

    def matched_servers(self) -> set[int]:
        return set(self.state.matched)

    def query_log(self):
        return list(self.oracle.log)

    def virtual_prediction(self, t: int) -> frozenset[int]:
        """Anchor union the subroutine's matches; only defined off query rounds."""
        if t % self.k == 0:
            raise UsageError(f"round {t} is a query round; the prediction is not virtual")
        synth = {self.sub_slots[j] for j in self.sub.matched_servers()}
        pred = self.anchor | synth
        if len(pred) != t:
            raise ContractViolationError(
                f"virtual prediction has size {len(pred)} at round {t}"
            )
        return frozenset(pred)

    def serve(self, request_point: int) -> int:
        self.t += 1
        t = self.t
        if t % self.k == 0:
            slots = tuple(int(s) for s in self.oracle.query(t))
            pred = frozenset(slots)
            if len(pred) != t:
                raise ContractViolationError(f"oracle returned {len(pred)} slots at round {t}")
            self.anchor = pred
            self.query_rounds.append(t)
            self._start_subroutine()
        else:
            self.sub.serve(request_point)
            pred = self.virtual_prediction(t)
        slot, mu1 = ftp.ftp_step(self.state, request_point, pred)
        self.mu1_costs.append(mu1)
        self.predictions.append(pred)
        return slot


def preset(
    name: str, k: int, oracle, matcher_name: str | None = None
) -> ParsimoniousMatcher:
    if matcher_name is None:
        matcher_name = "ours" if name == "det-general" else f"ours[{name}]"
    return ParsimoniousMatcher(k=k, oracle=oracle, preset_name=name, name=matcher_name)
