"""Metric spaces over indexed point sets, multiset configurations, and the
configuration distance.

A :class:`MetricSpace` owns an indexed list of points and answers distances
between point indices.  Five kinds are supported:

``line``
    points are real coordinates, distance is the absolute difference.
``plane``
    points are ``(x, y)`` pairs, distance is Euclidean rounded to 9 decimals.
``manhattan``
    points are ``(x, y)`` pairs, distance is ``|dx| + |dy|``.
``explicit``
    points index into a symmetric nonnegative matrix that is validated to be
    a metric on construction.
``hst``
    points are leaf ids of a hierarchically well-separated tree; distance is
    the tree path length.

A :class:`Configuration` is a multiset of point indices.  The distance between
two equal-size configurations is the cost of a minimum-cost perfect matching
between them, computed by :mod:`ommatch.assignment`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateMetricError, UsageError

KINDS = ("line", "plane", "manhattan", "explicit", "hst")

# Euclidean plane distances are rounded so that distances survive JSON
# round-trips bit for bit.
PLANE_DECIMALS = 9


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """An indexed point set with a distance function.

    ``scale`` multiplies every distance; it exists so instances can be
    rescaled (e.g. to unit optimal cost) without touching the points.
    """

    kind: str
    points: tuple
    matrix: np.ndarray | None = None
    tree: object | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown metric kind {self.kind!r}")
        if self.scale <= 0 or not math.isfinite(self.scale):
            raise UsageError("scale must be positive and finite")
        object.__setattr__(self, "points", _canonical_points(self.kind, self.points))
        if self.kind == "explicit":
            if self.matrix is None:
                raise UsageError("explicit metric requires a matrix")
            m = np.asarray(self.matrix, dtype=float)
            _validate_metric_matrix(m)
            if any(not isinstance(p, int) or not 0 <= p < m.shape[0] for p in self.points):
                raise UsageError("explicit points must index into the matrix")
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise UsageError(f"matrix is only valid for kind 'explicit', not {self.kind!r}")
        if self.kind == "hst":
            if self.tree is None:
                raise UsageError("hst metric requires a tree")
            leaves = set(self.tree.leaf_ids())
            if any(p not in leaves for p in self.points):
                raise UsageError("hst points must be leaf ids of the tree")
        elif self.tree is not None:
            raise UsageError(f"tree is only valid for kind 'hst', not {self.kind!r}")

    @property
    def n_points(self) -> int:
        return len(self.points)

    def check_index(self, u: int) -> None:
        if not isinstance(u, (int, np.integer)) or not 0 <= u < self.n_points:
            raise UsageError(f"point index {u!r} out of range [0, {self.n_points})")

    def distance(self, u: int, v: int) -> float:
        """Distance between point indices ``u`` and ``v``."""
        self.check_index(u)
        self.check_index(v)
        p, q = self.points[u], self.points[v]
        if self.kind == "line":
            d = abs(p - q)
        elif self.kind == "plane":
            dx, dy = p[0] - q[0], p[1] - q[1]
            d = round(math.sqrt(dx * dx + dy * dy), PLANE_DECIMALS)
        elif self.kind == "manhattan":
            d = abs(p[0] - q[0]) + abs(p[1] - q[1])
        elif self.kind == "explicit":
            d = float(self.matrix[p, q])
        else:
            d = self.tree.leaf_distance(p, q)
        return d * self.scale

    @cached_property
    def _pairwise(self) -> np.ndarray:
        n = self.n_points
        if self.kind == "line":
            c = np.asarray(self.points, dtype=float)
            d = np.abs(c[:, None] - c[None, :])
        elif self.kind == "plane":
            c = np.asarray(self.points, dtype=float)
            dx = c[:, None, 0] - c[None, :, 0]
            dy = c[:, None, 1] - c[None, :, 1]
            d = np.round(np.sqrt(dx * dx + dy * dy), PLANE_DECIMALS)
        elif self.kind == "manhattan":
            c = np.asarray(self.points, dtype=float)
            d = np.abs(c[:, None, 0] - c[None, :, 0]) + np.abs(c[:, None, 1] - c[None, :, 1])
        elif self.kind == "explicit":
            idx = np.asarray(self.points, dtype=int)
            d = self.matrix[np.ix_(idx, idx)].astype(float)
        else:
            d = np.zeros((n, n))
            for i in range(n):
                for j in range(i + 1, n):
                    d[i, j] = d[j, i] = self.tree.leaf_distance(self.points[i], self.points[j])
        return d * self.scale

    def pairwise(self) -> np.ndarray:
        """Full distance matrix over all points (cached)."""
        return self._pairwise

    def rescaled(self, factor: float) -> "MetricSpace":
        """A copy of this space with every distance multiplied by ``factor``."""
        if factor <= 0 or not math.isfinite(factor):
            raise UsageError("rescale factor must be positive and finite")
        return replace(self, scale=self.scale * factor)

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "points": [list(p) if isinstance(p, tuple) else p for p in self.points]}
        if self.matrix is not None:
            doc["matrix"] = self.matrix.tolist()
        if self.tree is not None:
            doc["tree"] = self.tree.to_json()
        if self.scale != 1.0:
            doc["scale"] = self.scale
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "MetricSpace":
        kind = doc["kind"]
        matrix = np.asarray(doc["matrix"], dtype=float) if "matrix" in doc else None
        tree = None
        if "tree" in doc:
            from .hst import Hst

            tree = Hst.from_json(doc["tree"])
        return cls(
            kind=kind,
            points=tuple(doc["points"]),
            matrix=matrix,
            tree=tree,
            scale=float(doc.get("scale", 1.0)),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "MetricSpace":
        return cls.from_json(json.loads(text))


def _canonical_points(kind: str, points) -> tuple:
    if kind == "line":
        return tuple(float(p) for p in points)
    if kind in ("plane", "manhattan"):
        return tuple((float(p[0]), float(p[1])) for p in points)
    return tuple(int(p) for p in points)


def _validate_metric_matrix(m: np.ndarray, tol: float = 1e-9) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError("distance matrix must be square")
    if not np.all(np.isfinite(m)):
        raise UsageError("distance matrix must be finite")
    if np.any(m < 0):
        raise UsageError("distance matrix must be nonnegative")
    if np.any(np.abs(np.diagonal(m)) > 0):
        raise UsageError("distance matrix must have a zero diagonal")
    if np.any(np.abs(m - m.T) > tol):
        raise UsageError("distance matrix must be symmetric")
    for k in range(m.shape[0]):
        if np.any(m > m[:, [k]] + m[[k], :] + tol):
            raise UsageError("distance matrix violates the triangle inequality")


@dataclass(frozen=True)
class Configuration:
    """A multiset of point indices, kept sorted for canonical form."""

    elements: tuple[int, ...] = ()

    @classmethod
    def of(cls, items: Iterable[int]) -> "Configuration":
        return cls(tuple(sorted(int(x) for x in items)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def union(self, other: "Configuration | Iterable[int]") -> "Configuration":
        return Configuration.of(list(self.elements) + list(other))

    def difference(self, other: "Configuration | Iterable[int]") -> "Configuration":
        """Multiset difference: removes one copy per matching element."""
        out = list(self.elements)
        for x in other:
            try:
                out.remove(x)
            except ValueError:
                pass
        return Configuration.of(out)

    def intersection(self, other: "Configuration | Iterable[int]") -> "Configuration":
        """Multiset intersection: per-element minimum multiplicity."""
        from collections import Counter

        mine, theirs = Counter(self.elements), Counter(other)
        out = []
        for x, c in mine.items():
            out.extend([x] * min(c, theirs.get(x, 0)))
        return Configuration.of(out)


def _as_elements(config) -> list[int]:
    if isinstance(config, Configuration):
        return list(config.elements)
    return [int(x) for x in config]


def config_dist(space: MetricSpace, a, b) -> float:
    """Distance between two equal-size multisets of point indices.

    Defined as the cost of a minimum-cost perfect matching between the
    multisets under the space's metric.
    """
    ea, eb = _as_elements(a), _as_elements(b)
    if len(ea) != len(eb):
        raise UsageError(f"configurations must have equal size, got {len(ea)} and {len(eb)}")
    if not ea:
        return 0.0
    for x in ea + eb:
        space.check_index(x)
    from .assignment import solve_min_cost_perfect

    costs = space.pairwise()[np.ix_(ea, eb)]
    return solve_min_cost_perfect(costs).cost


def noise_scale_stats(space: MetricSpace) -> tuple[float, float]:
    """``(d_min, d_med)``: smallest and lower-median nonzero pairwise distance."""
    d = space.pairwise()
    iu = np.triu_indices(space.n_points, k=1)
    vals = d[iu]
    vals = np.sort(vals[vals > 0])
    if vals.size == 0:
        raise DegenerateMetricError("space has no nonzero pairwise distance")
    return float(vals[0]), float(vals[(vals.size - 1) // 2])
