"""Bipartite edge types, the sampled-subgraph structure, and exact butterfly counting.

A butterfly is a 2x2 biclique: two left vertices both adjacent to the same
two right vertices.  Everything here is deterministic and single-owner
mutable; estimators build on top of these primitives.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True, slots=True)
class VertexId:
    """A side-tagged vertex: left and right id spaces never collide."""

    side: Side
    id: int


@dataclass(frozen=True, slots=True)
class Edge:
    """An edge from a left vertex to a right vertex.

    Bipartiteness is enforced at construction so it can never be violated
    downstream.  Equal edges hash and compare equal, which is what makes
    duplicate occurrences in a stream detectable.
    """

    u: VertexId
    v: VertexId

    def __post_init__(self) -> None:
        if self.u.side is not Side.LEFT or self.v.side is not Side.RIGHT:
            raise ValueError(f"edge must go left->right, got ({self.u}, {self.v})")

    def ids(self) -> tuple[int, int]:
        """Canonical (left id, right id) encoding used by the hash functions."""
        return (self.u.id, self.v.id)


def edge(u_id: int, v_id: int) -> Edge:
    """Build an edge from raw integer ids."""
    return Edge(VertexId(Side.LEFT, u_id), VertexId(Side.RIGHT, v_id))


class SampledSubgraph:
    """Adjacency over the currently sampled edges.

    Symmetric neighbor sets, no duplicate edges, capacity never exceeded.
    Removal drops isolated vertices so memory accounting reflects only the
    live sample.
    """

    __slots__ = ("adjacency", "edge_count", "capacity")

    def __init__(self, capacity: int | None = None) -> None:
        self.adjacency: dict[VertexId, set[VertexId]] = {}
        self.edge_count = 0
        self.capacity = capacity

    def __contains__(self, e: Edge) -> bool:
        nbrs = self.adjacency.get(e.u)
        return nbrs is not None and e.v in nbrs

    def __len__(self) -> int:
        return self.edge_count

    def neighbors(self, x: VertexId) -> set[VertexId]:
        return self.adjacency.get(x, set())

    def edges(self) -> Iterator[Edge]:
        for x, nbrs in self.adjacency.items():
            if x.side is Side.LEFT:
                for y in nbrs:
                    yield Edge(x, y)

    def insert_edge(self, e: Edge) -> None:
        if e in self:
            raise ValueError(f"duplicate insert of {e}")
        if self.capacity is not None and self.edge_count >= self.capacity:
            raise ValueError("sampled subgraph is at capacity")
        adj = self.adjacency
        adj.setdefault(e.u, set()).add(e.v)
        adj.setdefault(e.v, set()).add(e.u)
        self.edge_count += 1

    def remove_edge(self, e: Edge) -> None:
        adj = self.adjacency
        nbrs = adj.get(e.u)
        if nbrs is None or e.v not in nbrs:
            raise ValueError(f"removing absent edge {e}")
        nbrs.discard(e.v)
        if not nbrs:
            del adj[e.u]
        back = adj[e.v]
        back.discard(e.u)
        if not back:
            del adj[e.v]
        self.edge_count -= 1


def closed_butterflies(g: SampledSubgraph, u: VertexId, v: VertexId) -> tuple[int, int]:
    """Butterflies that inserting (u, v) would close, plus the probe cost.

    Counts pairs (w, l) with w in N[u] and l in N[w] & N[v].  Requires
    (u, v) not already in g, which makes the w != v / l != u exclusions
    automatic.  Cost is the intersection work: sum of min set sizes probed.
    """
    adj = g.adjacency
    nv = adj.get(v)
    nu = adj.get(u)
    if not nv or not nu:
        return 0, 0
    count = 0
    work = 0
    len_nv = len(nv)
    for w in nu:
        nw = adj[w]
        work += min(len(nw), len_nv)
        if len(nw) < len_nv:
            for l in nw:
                if l in nv:
                    count += 1
        else:
            for l in nv:
                if l in nw:
                    count += 1
    return count, work


def count_new_butterflies(g: SampledSubgraph, e: Edge, theta: float) -> float:
    """theta times the number of butterflies that e would close in g.

    g is not modified; e must not be present in g.
    """
    if e in g:
        raise ValueError(f"{e} already present in subgraph")
    count, _ = closed_butterflies(g, e.u, e.v)
    return theta * count


def exact_butterfly_count(edges: Iterable[Edge]) -> int:
    """Exact butterfly count of a deduplicated edge set via wedge aggregation.

    For every vertex on the aggregation side, every unordered pair of its
    neighbors is one wedge; a pair of vertices joined by w wedges spans
    C(w, 2) butterflies.  Aggregates through the side with the smaller
    sum of squared degrees.
    """
    left: dict[int, list[int]] = {}
    right: dict[int, list[int]] = {}
    seen: set[tuple[int, int]] = set()
    for e in edges:
        key = e.ids()
        if key in seen:
            continue
        seen.add(key)
        left.setdefault(key[0], []).append(key[1])
        right.setdefault(key[1], []).append(key[0])

    cost_left = sum(len(n) * len(n) for n in left.values())
    cost_right = sum(len(n) * len(n) for n in right.values())
    groups = left if cost_left <= cost_right else right

    wedges: Counter[tuple[int, int]] = Counter()
    for nbrs in groups.values():
        nbrs.sort()
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                wedges[(a, b)] += 1
    return sum(w * (w - 1) // 2 for w in wedges.values())
