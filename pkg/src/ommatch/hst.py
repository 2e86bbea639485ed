"""2-hierarchically-well-separated trees, random embeddings, and the
randomized tree matcher.

A 2-HST is a rooted tree in which all edges from a node to its children have
the same length and every internal node's parent edge is exactly twice its
child edges.  ``frt_embed`` draws a random 2-HST over a space's points (random
permutation plus a radius scale ``beta`` drawn uniformly from [1, 2) times
powers of two) whose leaf distances dominate the original metric and whose
expected distortion is logarithmic in the point count.

``BbgnMatcher`` is the randomized online matcher for tree metrics: it keeps a
level per server (the subtree height at which the server was matched), lets a
new request steal a uniformly random server from the lowest ring that holds
one at a higher level, and cascades the displaced request upward until an
unmatched server absorbs the chain.  Its maintained matching stays optimal on
the tree, and its online cost is O(log t)-competitive round by round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import ceil, floor, log2

import numpy as np

from .errors import UsageError

_UNSET = -1


@dataclass(frozen=True, eq=False)
class Hst:
    """Rooted tree with parent pointers and parent-edge lengths.

    ``leaf_points`` maps each leaf node to the point ids that were embedded
    there; by default each leaf represents itself.
    """

    parents: tuple[int, ...]
    lengths: tuple[float, ...]
    leaf_points: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        m = len(self.parents)
        if m == 0 or len(self.lengths) != m:
            raise UsageError("parents and lengths must be nonempty and equal-length")
        roots = [i for i, p in enumerate(self.parents) if p == _UNSET]
        if len(roots) != 1:
            raise UsageError("tree must have exactly one root")
        if not self.leaf_points:
            object.__setattr__(
                self, "leaf_points", tuple((leaf, (leaf,)) for leaf in self._leaves_raw())
            )
        self._validate()

    def _leaves_raw(self) -> list[int]:
        has_child = [False] * len(self.parents)
        for i, p in enumerate(self.parents):
            if p != _UNSET:
                has_child[p] = True
        return [i for i, h in enumerate(has_child) if not h]

    def _validate(self) -> None:
        m = len(self.parents)
        # depths also prove the parent pointers are acyclic
        depth: list[int | None] = [None] * m
        for i in range(m):
            trail = []
            j = i
            while j != _UNSET and depth[j] is None:
                trail.append(j)
                j = self.parents[j]
                if len(trail) > m:
                    raise UsageError("parent pointers contain a cycle")
            for node in reversed(trail):
                p = self.parents[node]
                depth[node] = 0 if p == _UNSET else depth[p] + 1
        object.__setattr__(self, "_depth", tuple(depth))
        kids: list[list[int]] = [[] for _ in range(m)]
        for i, p in enumerate(self.parents):
            if p != _UNSET:
                kids[p].append(i)
                if not (self.lengths[i] > 0):
                    raise UsageError("non-root edges must have positive length")
        for u in range(m):
            if not kids[u]:
                continue
            child_lens = {self.lengths[c] for c in kids[u]}
            if len(child_lens) > 1:
                lo, hi = min(child_lens), max(child_lens)
                if hi - lo > 1e-12 * max(hi, 1.0):
                    raise UsageError("all child edges of a node must have equal length")
            if self.parents[u] != _UNSET:
                child = self.lengths[kids[u][0]]
                if abs(self.lengths[u] - 2.0 * child) > 1e-12 * max(self.lengths[u], 1.0):
                    raise UsageError("parent edge must be exactly twice the child edge")
        object.__setattr__(self, "_children", tuple(tuple(k) for k in kids))
        leaf_set = set(self._leaves_raw())
        mapped = [leaf for leaf, _ in self.leaf_points]
        if set(mapped) != leaf_set or len(mapped) != len(leaf_set):
            raise UsageError("leaf_points must cover every leaf exactly once")

    # -- structure --------------------------------------------------------

    @property
    def root(self) -> int:
        return self.parents.index(_UNSET)

    def children(self, u: int) -> tuple[int, ...]:
        return self._children[u]

    def depth(self, u: int) -> int:
        return self._depth[u]

    def leaf_ids(self) -> list[int]:
        return [leaf for leaf, _ in self.leaf_points]

    @cached_property
    def leaf_of_point(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for leaf, pts in self.leaf_points:
            for p in pts:
                out[p] = leaf
        return out

    @cached_property
    def _leaves_under(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, tuple[int, ...]] = {}

        def walk(u: int) -> list[int]:
            if not self._children[u]:
                out[u] = (u,)
                return [u]
            acc: list[int] = []
            for c in self._children[u]:
                acc.extend(walk(c))
            acc.sort()
            out[u] = tuple(acc)
            return acc

        walk(self.root)
        return out

    def leaves_under(self, u: int) -> tuple[int, ...]:
        return self._leaves_under[u]

    def ancestor(self, leaf: int, h: int) -> int:
        """The node ``h`` levels above ``leaf``."""
        u = leaf
        for _ in range(h):
            if self.parents[u] == _UNSET:
                raise UsageError(f"height {h} exceeds the depth of leaf {leaf}")
            u = self.parents[u]
        return u

    def uniform_leaf_depth(self) -> int | None:
        depths = {self.depth(leaf) for leaf in self.leaf_ids()}
        return depths.pop() if len(depths) == 1 else None

    def leaf_distance(self, u: int, v: int) -> float:
        """Length of the tree path between two leaves."""
        if u == v:
            return 0.0
        total = 0.0
        du, dv = self.depth(u), self.depth(v)
        while du > dv:
            total += self.lengths[u]
            u = self.parents[u]
            du -= 1
        while dv > du:
            total += self.lengths[v]
            v = self.parents[v]
            dv -= 1
        while u != v:
            total += self.lengths[u] + self.lengths[v]
            u, v = self.parents[u], self.parents[v]
        return total

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "parents": list(self.parents),
            "lengths": list(self.lengths),
            "leaf_points": [[leaf, list(pts)] for leaf, pts in self.leaf_points],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Hst":
        return cls(
            parents=tuple(doc["parents"]),
            lengths=tuple(doc["lengths"]),
            leaf_points=tuple((int(leaf), tuple(pts)) for leaf, pts in doc["leaf_points"]),
        )


def hst_distance(tree: Hst, u: int, v: int) -> float:
    return tree.leaf_distance(u, v)


def hst_space(tree: Hst):
    """Metric space whose points are the tree's leaves."""
    from .metric import MetricSpace

    return MetricSpace(kind="hst", points=tuple(tree.leaf_ids()), tree=tree)


def star_hst(n: int, arm: float = 1.0) -> Hst:
    """Root with ``n`` leaf children at distance ``arm``; leaf i maps to point i."""
    if n < 1:
        raise UsageError("star needs at least one leaf")
    parents = (-1,) + (0,) * n
    lengths = (0.0,) + (float(arm),) * n
    leaf_points = tuple((i, (i - 1,)) for i in range(1, n + 1))
    return Hst(parents=parents, lengths=lengths, leaf_points=leaf_points)


def frt_embed(space, rng: np.random.Generator, points=None) -> Hst:
    """Random 2-HST over ``points`` (default: all of the space) dominating the
    metric, with logarithmic expected distortion.

    Points at distance zero share a leaf.  All leaves sit at the same depth,
    and edges double level by level, so the result is a valid 2-HST.
    """
    pts = list(range(space.n_points)) if points is None else [int(p) for p in points]
    if not pts:
        raise UsageError("cannot embed an empty point set")
    d = space.pairwise()

    # collapse zero-distance classes; reps index into `pts`
    reps: list[int] = []
    class_of: list[int] = []
    for i, p in enumerate(pts):
        for ci, r in enumerate(reps):
            if d[p, pts[r]] == 0.0:
                class_of.append(ci)
                break
        else:
            class_of.append(len(reps))
            reps.append(i)
    k = len(reps)
    classes: list[list[int]] = [[] for _ in range(k)]
    for i, ci in enumerate(class_of):
        classes[ci].append(pts[i])

    if k == 1:
        return Hst(parents=(-1,), lengths=(0.0,), leaf_points=((0, tuple(classes[0])),))

    rd = d[np.ix_([pts[r] for r in reps], [pts[r] for r in reps])]
    dmin = rd[rd > 0].min()
    diam = rd.max()
    top = ceil(log2(diam))
    bottom = floor(log2(dmin)) - 1

    beta = float(rng.uniform(1.0, 2.0))
    order = rng.permutation(k)
    rank = np.empty(k, dtype=int)
    rank[order] = np.arange(k)

    parents: list[int] = [-1]
    lengths: list[float] = [0.0]
    leaf_points: list[tuple[int, tuple[int, ...]]] = []
    # clusters as (node id, member rep list); split level by level
    current: list[tuple[int, list[int]]] = [(0, list(range(k)))]
    for level in range(top, bottom, -1):
        radius = beta * 2.0 ** (level - 1)
        edge = beta * 2.0**level
        nxt: list[tuple[int, list[int]]] = []
        for node, members in current:
            groups: dict[int, list[int]] = {}
            for u in members:
                within = np.flatnonzero(rd[u] <= radius)
                center = int(within[np.argmin(rank[within])])
                groups.setdefault(center, []).append(u)
            for center in sorted(groups, key=lambda c: min(groups[c])):
                child = len(parents)
                parents.append(node)
                lengths.append(edge)
                nxt.append((child, groups[center]))
        current = nxt
    for node, members in current:
        assert len(members) == 1
        leaf_points.append((node, tuple(sorted(classes[members[0]]))))

    return Hst(parents=tuple(parents), lengths=tuple(lengths), leaf_points=tuple(leaf_points))


class EmbeddedBbgnMatcher:
    """Tree matcher for general metrics: draws a random 2-HST over the
    servers at init, then delegates; embedding and tree choices use separate
    rng sub-streams."""

    def __init__(self, name: str = "bbgn"):
        self.name = name

    def init(self, space, servers, rng) -> None:
        ss = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(rng)
        embed_ss, choice_ss = ss.spawn(2)
        tree = frt_embed(space, np.random.default_rng(embed_ss), points=servers)
        self._inner = BbgnMatcher(tree=tree, name=self.name)
        self._inner.init(space, servers, choice_ss)

    def serve(self, request_point: int) -> int:
        return self._inner.serve(request_point)

    def matched_servers(self) -> set[int]:
        return self._inner.matched_servers()


class BbgnMatcher:
    """Randomized online matcher for 2-HST metrics.

    With no explicit tree the instance space must be of kind ``hst`` and
    request points must be leaves.  With an explicit tree (the embedding
    path), requests are snapped to the nearest server's leaf before entering
    the tree; the harness still prices edges in the original metric.
    """

    def __init__(self, tree: Hst | None = None, name: str = "bbgn"):
        self.tree = tree
        self.name = name

    def init(self, space, servers, rng) -> None:
        tree = self.tree
        if tree is None:
            if space.kind != "hst":
                raise UsageError("bbgn without an explicit tree needs an hst-kind space")
            tree = space.tree
            leaf_of_slot = [space.points[s] for s in servers]
        else:
            missing = [p for p in servers if p not in tree.leaf_of_point]
            if missing:
                raise UsageError(f"servers {missing} are not embedded in the tree")
            leaf_of_slot = [tree.leaf_of_point[p] for p in servers]
        height = tree.uniform_leaf_depth()
        if height is None:
            raise UsageError("bbgn requires all leaves at the same depth")
        self._tree = tree
        self._height = height
        self._space = space
        self.server_points = np.asarray(servers, dtype=int)
        self.leaf_of_slot = leaf_of_slot
        self.slots_at_leaf: dict[int, list[int]] = {}
        for slot, leaf in enumerate(leaf_of_slot):
            self.slots_at_leaf.setdefault(leaf, []).append(slot)
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        n = len(servers)
        self.level_of_server = [None] * n  # None = unmatched
        self.partner_of_server = [-1] * n
        self.partner_of_request: list[int] = []
        self.level_of_request: list[int] = []
        self.request_leaf: list[int] = []
        self.mon: list[int] = []

    def matched_servers(self) -> set[int]:
        return {s for s, q in enumerate(self.partner_of_server) if q >= 0}

    def offline_pairs(self) -> list[tuple[int, int]]:
        return [(i, s) for i, s in enumerate(self.partner_of_request)]

    def offline_cost(self) -> float:
        """Cost of the maintained matching in the tree metric."""
        return float(
            sum(
                self._tree.leaf_distance(self.request_leaf[i], self.leaf_of_slot[s])
                for i, s in enumerate(self.partner_of_request)
            )
        )

    maintained_offline_cost = offline_cost

    def _snap(self, request_point: int) -> int:
        if self.tree is None:
            leaf = self._space.points[request_point]
        else:
            leaf = self._tree.leaf_of_point.get(request_point)
        if leaf is not None and leaf in self.slots_at_leaf:
            return leaf
        row = self._space.pairwise()[request_point, self.server_points]
        return self.leaf_of_slot[int(np.argmin(row))]

    def _ring(self, leaf: int, h: int) -> tuple[int, ...]:
        inner = self._tree.leaves_under(self._tree.ancestor(leaf, h))
        if h == 0:
            return inner
        excl = set(self._tree.leaves_under(self._tree.ancestor(leaf, h - 1)))
        return tuple(lf for lf in inner if lf not in excl)

    def serve(self, request_point: int) -> int:
        if all(q >= 0 for q in self.partner_of_server):
            raise UsageError("all servers already matched")
        leaf = self._snap(request_point)
        r_idx = len(self.partner_of_request)
        self.partner_of_request.append(-1)
        self.level_of_request.append(0)
        self.request_leaf.append(leaf)

        cur_request, cur_leaf, cur_level = r_idx, leaf, 0
        for _ in range(len(self.partner_of_server) + self._height + 1):
            chosen = None
            for h in range(cur_level, self._height + 1):
                cand = [
                    s
                    for lf in self._ring(cur_leaf, h)
                    for s in self.slots_at_leaf.get(lf, [])
                    if self.level_of_server[s] is None or self.level_of_server[s] > h
                ]
                if cand:
                    cand.sort()
                    chosen = cand[int(self.rng.integers(len(cand)))]
                    break
            if chosen is None:
                raise AssertionError("no candidate server; maintained matching was not optimal")
            displaced = self.partner_of_server[chosen]
            old_level = self.level_of_server[chosen]
            self.partner_of_server[chosen] = cur_request
            self.partner_of_request[cur_request] = chosen
            self.level_of_server[chosen] = h
            self.level_of_request[cur_request] = h
            if displaced < 0:
                self.mon.append(chosen)
                return chosen
            cur_request, cur_leaf, cur_level = displaced, self.request_leaf[displaced], old_level
        raise AssertionError("reassignment chain failed to terminate")
