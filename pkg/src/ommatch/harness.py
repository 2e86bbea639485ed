"""Online matching harness: instances, transcripts, and the run loop.

An instance fixes a metric space, ``n`` server point indices, and ``n``
request point indices in arrival order.  A matcher consumes requests one at a
time and must answer with a previously unused server slot (an index into the
server list, so co-located servers stay distinguishable).  The harness
enforces that contract, prices each edge in the instance metric, and collects
a transcript.

Randomness contract: every run owns a seed; the matcher receives a spawned
``numpy.random.SeedSequence`` child so that independent runs never share
streams and re-running with the same seed reproduces the transcript bit for
bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Protocol

import numpy as np

from . import assignment
from .errors import ContractViolationError, SkipInstance, UsageError
from .metric import MetricSpace


@dataclass(frozen=True, eq=False)
class Instance:
    """An online matching instance: servers and requests are point indices."""

    space: MetricSpace
    servers: tuple[int, ...]
    requests: tuple[int, ...]
    label: str = ""
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "servers", tuple(int(s) for s in self.servers))
        object.__setattr__(self, "requests", tuple(int(r) for r in self.requests))
        if len(self.servers) == 0:
            raise UsageError("instance needs at least one server")
        if len(self.servers) != len(self.requests):
            raise UsageError("instance needs equally many servers and requests")
        for p in self.servers + self.requests:
            self.space.check_index(p)

    @property
    def n(self) -> int:
        return len(self.servers)

    @cached_property
    def opt_ref(self) -> assignment.OptimalReference:
        return assignment.offline_opt(self)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "seed": self.seed,
            "space": self.space.to_json(),
            "servers": list(self.servers),
            "requests": list(self.requests),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Instance":
        return cls(
            space=MetricSpace.from_json(doc["space"]),
            servers=tuple(doc["servers"]),
            requests=tuple(doc["requests"]),
            label=doc.get("label", ""),
            seed=int(doc.get("seed", 0)),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "Instance":
        return cls.from_json(json.loads(text))


class OnlineMatcher(Protocol):
    """Contract every online algorithm implements."""

    name: str

    def init(self, space: MetricSpace, servers: tuple[int, ...], rng: np.random.SeedSequence) -> None:
        ...

    def serve(self, request_point: int) -> int:
        ...

    def matched_servers(self) -> set[int]:
        ...


@dataclass(frozen=True)
class Transcript:
    """Record of one run: per-round assignments plus oracle usage."""

    algorithm: str
    label: str
    seed: int
    assignments: tuple[tuple[int, int, float], ...]  # (round, server slot, edge cost)
    query_rounds: tuple[int, ...]
    per_query_error: tuple[tuple[int, float], ...]
    total_cost: float
    opt_cost: float

    def eta(self) -> float:
        """Total prediction error over the rounds that were actually queried."""
        return float(sum(e for _, e in self.per_query_error))

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "label": self.label,
            "seed": self.seed,
            "assignments": [list(a) for a in self.assignments],
            "query_rounds": list(self.query_rounds),
            "per_query_error": [list(q) for q in self.per_query_error],
            "total_cost": self.total_cost,
            "opt_cost": self.opt_cost,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def run(matcher: OnlineMatcher, instance: Instance, seed: int | np.random.SeedSequence = 0) -> Transcript:
    """Feed the instance through the matcher and return the transcript."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    matcher.init(instance.space, instance.servers, ss.spawn(1)[0])
    n = instance.n
    used: set[int] = set()
    rows = []
    total = 0.0
    for t, r in enumerate(instance.requests, start=1):
        slot = matcher.serve(r)
        if not isinstance(slot, (int, np.integer)) or not 0 <= slot < n:
            raise ContractViolationError(f"round {t}: invalid server slot {slot!r}")
        slot = int(slot)
        if slot in used:
            raise ContractViolationError(f"round {t}: server slot {slot} already matched")
        used.add(slot)
        cost = instance.space.distance(instance.servers[slot], r)
        total += cost
        rows.append((t, slot, cost))
    if matcher.matched_servers() != used:
        raise ContractViolationError("matcher's matched-server set disagrees with the harness")
    log = list(getattr(matcher, "query_log", lambda: [])())
    return Transcript(
        algorithm=getattr(matcher, "name", type(matcher).__name__),
        label=instance.label,
        seed=instance.seed,
        assignments=tuple(rows),
        query_rounds=tuple(t for t, _ in log),
        per_query_error=tuple((t, float(e)) for t, e in log),
        total_cost=float(total),
        opt_cost=float(instance.opt_ref.cost),
    )


def ratio(transcript: Transcript) -> float:
    """Cost ratio against the offline optimum; zero-cost optima are skipped."""
    if transcript.opt_cost <= 0.0:
        raise SkipInstance(f"instance {transcript.label!r} has optimal cost 0")
    return transcript.total_cost / transcript.opt_cost
