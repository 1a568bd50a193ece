"""Maximum bipartite matching and perfect / almost-perfect matching checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from .graph import Edge, FaultSet, Graph, GraphView, apply_faults, canon, full_view

INF = 1 << 30

ANY = "any"
PERFECT = "perfect"
ALMOST_PERFECT = "almost-perfect"


class Matching:
    """A set of pairwise vertex-disjoint canonical edges."""

    __slots__ = ("edges", "_covered")

    def __init__(self, edges: Iterable[Sequence[int]] = ()) -> None:
        self.edges = frozenset(canon(int(u), int(v)) for u, v in edges)
        covered: set[int] = set()
        for u, v in self.edges:
            if u in covered or v in covered:
                raise ValueError(f"edges overlap at ({u}, {v})")
            covered.update((u, v))
        self._covered = frozenset(covered)

    @property
    def coverage(self) -> int:
        return len(self._covered)

    @property
    def covered(self) -> frozenset[int]:
        return self._covered

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.sorted_edges())

    def __contains__(self, e: Sequence[int]) -> bool:
        return canon(e[0], e[1]) in self.edges

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matching) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __and__(self, other: Matching) -> frozenset[Edge]:
        return self.edges & other.edges

    def __repr__(self) -> str:
        return f"Matching({self.sorted_edges()})"


def hopcroft_karp(
    adj: Sequence[Sequence[tuple[int, int]]],
    side: Sequence[int],
    alive: Sequence[bool],
    dead_edges: Collection[int],
    mate: list[int],
) -> int:
    """Grow ``mate`` in place to a maximum matching; return its cardinality.

    ``mate`` may hold any valid matching of the view on entry (warm start).
    Left vertices are those with ``side == 0``; scans go by ascending index.
    """
    order = len(adj)
    left = [v for v in range(order) if alive[v] and side[v] == 0]
    size = sum(1 for v in left if mate[v] != -1)
    dist = [INF] * order
    while True:
        # layered BFS from free left vertices
        queue = deque()
        for v in left:
            if mate[v] == -1:
                dist[v] = 0
                queue.append(v)
            else:
                dist[v] = INF
        found = False
        while queue:
            x = queue.popleft()
            dx = dist[x] + 1
            for w, e in adj[x]:
                if not alive[w] or e in dead_edges:
                    continue
                m = mate[w]
                if m == -1:
                    found = True
                elif dist[m] == INF:
                    dist[m] = dx
                    queue.append(m)
        if not found:
            return size
        ptr = [0] * order
        for root in left:
            if mate[root] != -1:
                continue
            stack = [root]
            via: list[int] = []
            while stack:
                x = stack[-1]
                nbrs = adj[x]
                pushed = False
                while ptr[x] < len(nbrs):
                    w, e = nbrs[ptr[x]]
                    ptr[x] += 1
                    if not alive[w] or e in dead_edges:
                        continue
                    m = mate[w]
                    if m == -1:
                        for lv, rv in zip(stack, via + [w]):
                            mate[lv] = rv
                            mate[rv] = lv
                        size += 1
                        stack = []
                        pushed = True
                        break
                    if dist[m] == dist[x] + 1:
                        via.append(w)
                        stack.append(m)
                        pushed = True
                        break
                if not pushed:
                    dist[x] = INF
                    stack.pop()
                    if via:
                        via.pop()


def mate_from_matching(order: int, m: Iterable[Edge]) -> list[int]:
    mate = [-1] * order
    for u, v in m:
        mate[u], mate[v] = v, u
    return mate


def matching_from_mate(mate: Sequence[int]) -> Matching:
    return Matching((v, w) for v, w in enumerate(mate) if w > v)


def max_matching(g: Graph | GraphView, initial: Iterable[Edge] = ()) -> Matching:
    """Maximum-cardinality matching of a bipartite graph or fault view.

    ``initial`` edges still present in the view seed the search.
    """
    view = full_view(g)
    base = view.base
    mate = [-1] * base.order
    for u, v in initial:
        if view.has_edge(u, v) and mate[u] == -1 and mate[v] == -1:
            mate[u], mate[v] = v, u
    hopcroft_karp(base.adj, base.side, view._alive, view.dead_edges, mate)
    return matching_from_mate(mate)


def has_perfect_matching(g: Graph | GraphView) -> bool:
    view = full_view(g)
    if view.order % 2:
        return False
    return max_matching(view).coverage == view.order


def has_almost_perfect_matching(g: Graph | GraphView) -> bool:
    view = full_view(g)
    if view.order % 2 == 0:
        return False
    return max_matching(view).coverage == view.order - 1


@dataclass(frozen=True)
class MatchCheck:
    ok: bool
    reason: str | None = None  # "missing-edge" | "overlap" | "coverage"

    def __bool__(self) -> bool:
        return self.ok


def verify_matching(
    g: Graph | GraphView, edges: Matching | Iterable[Sequence[int]], kind: str = ANY
) -> MatchCheck:
    """Independent check of a claimed matching; never searches."""
    view = full_view(g)
    if isinstance(edges, Matching):
        edges = edges.edges
    covered: set[int] = set()
    for u, v in edges:
        if not view.has_edge(u, v):
            return MatchCheck(False, "missing-edge")
        if u in covered or v in covered:
            return MatchCheck(False, "overlap")
        covered.update((u, v))
    if kind == PERFECT and len(covered) != view.order:
        return MatchCheck(False, "coverage")
    if kind == ALMOST_PERFECT and len(covered) != view.order - 1:
        return MatchCheck(False, "coverage")
    if kind not in (ANY, PERFECT, ALMOST_PERFECT):
        raise ValueError(f"unknown matching kind {kind!r}")
    return MatchCheck(True)


def deficiency_witness(g: Graph | GraphView, m: Matching) -> tuple[frozenset[int], frozenset[int]]:
    """Hall witness for a maximum matching that leaves left vertices free.

    Returns ``(S, N(S))`` where ``S`` is every left vertex reachable from a free
    left vertex by an alternating path.  For a maximum matching
    ``|S| - |N(S)|`` equals the number of free left vertices.
    """
    view = full_view(g)
    base = view.base
    mate = mate_from_matching(base.order, m.edges)
    reached_left: set[int] = set()
    reached_right: set[int] = set()
    queue = deque()
    for v in view.vertices():
        if base.side[v] == 0 and mate[v] == -1:
            reached_left.add(v)
            queue.append(v)
    while queue:
        x = queue.popleft()
        for w in view.neighbors(x):
            if w in reached_right:
                continue
            reached_right.add(w)
            y = mate[w]
            if y != -1 and y not in reached_left:
                reached_left.add(y)
                queue.append(y)
    return frozenset(reached_left), frozenset(reached_right)


__all__ = [
    "ALMOST_PERFECT",
    "ANY",
    "PERFECT",
    "FaultSet",
    "MatchCheck",
    "Matching",
    "apply_faults",
    "deficiency_witness",
    "has_almost_perfect_matching",
    "has_perfect_matching",
    "hopcroft_karp",
    "max_matching",
    "verify_matching",
]
