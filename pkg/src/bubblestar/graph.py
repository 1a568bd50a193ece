"""Indexed undirected bipartite graphs and copy-free fault views."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised when a vertex or edge does not belong to a graph."""


def canon(u: int, v: int) -> Edge:
    """Canonical edge identity: smaller index first."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph on ``0..order-1``.

    Edges are canonical ``(u, v)`` pairs with ``u < v``, numbered in sorted
    order.  ``adj[v]`` lists ``(neighbor, edge_id)`` by ascending neighbor.
    The graph must be bipartite; ``side[v]`` is its 2-coloring (0 or 1), taken
    from ``side`` if given, else computed by breadth-first search.
    """

    def __init__(
        self,
        order: int,
        edges: Iterable[Sequence[int]],
        side: Sequence[int] | None = None,
    ) -> None:
        self.order = int(order)
        canon_edges = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise GraphError(f"edge ({u}, {v}) outside [0, {self.order})")
            canon_edges.add(canon(u, v))
        self._init_edges(sorted(canon_edges))
        self.side = list(side) if side is not None else two_coloring(self)

    def _init_edges(self, edges: list[Edge]) -> None:
        self.edges = edges
        self.edge_id = {e: k for k, e in enumerate(edges)}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.order)]
        for k, (u, v) in enumerate(edges):
            adj[u].append((v, k))
            adj[v].append((u, k))
        for lst in adj:
            lst.sort()
        self.adj = adj

    @property
    def size(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self.adj[v]]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edge_id

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.order:
            raise GraphError(f"vertex {v} not in graph")

    def check_edge(self, e: Sequence[int]) -> Edge:
        ce = canon(int(e[0]), int(e[1]))
        if ce not in self.edge_id:
            raise GraphError(f"edge {tuple(e)} not in graph")
        return ce

    def is_connected(self) -> bool:
        if self.order == 0:
            return True
        seen = [False] * self.order
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            x = queue.popleft()
            for w, _ in self.adj[x]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    queue.append(w)
        return count == self.order

    def label(self, v: int) -> str:
        """Human-readable vertex name; subclasses print permutations."""
        return str(v)


def two_coloring(g: Graph) -> list[int]:
    side = [-1] * g.order
    for start in range(g.order):
        if side[start] != -1:
            continue
        side[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for w, _ in g.adj[x]:
                if side[w] == -1:
                    side[w] = 1 - side[x]
                    queue.append(w)
                elif side[w] == side[x]:
                    raise GraphError("graph is not bipartite")
    return side


@dataclass(frozen=True)
class FaultSet:
    """Deleted vertices and edges.  Edges are stored canonically."""

    vertices: frozenset[int] = frozenset()
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(int(v) for v in self.vertices))
        object.__setattr__(
            self, "edges", frozenset(canon(int(u), int(v)) for u, v in self.edges)
        )

    @classmethod
    def of_edges(cls, edges: Iterable[Sequence[int]]) -> FaultSet:
        return cls(edges=frozenset(tuple(e) for e in edges))

    @classmethod
    def of_vertices(cls, vertices: Iterable[int]) -> FaultSet:
        return cls(vertices=frozenset(vertices))

    def __len__(self) -> int:
        return len(self.vertices) + len(self.edges)

    def induced_edges(self, g: Graph) -> set[Edge]:
        """Edges of ``g`` incident to a deleted vertex."""
        out = set()
        for v in self.vertices:
            for w, _ in g.adj[v]:
                out.add(canon(v, w))
        return out

    def validate(self, g: Graph) -> None:
        for v in self.vertices:
            g.check_vertex(v)
        for e in self.edges:
            g.check_edge(e)

    def sort_key(self) -> tuple:
        return (len(self), sorted(self.vertices), sorted(self.edges))

    def is_trivial(self, g: Graph) -> int | None:
        """Return the common vertex if every edge meets it (and no vertices are deleted)."""
        if self.vertices or not self.edges:
            return None
        common = None
        for u, v in self.edges:
            common = {u, v} if common is None else common & {u, v}
            if not common:
                return None
        return min(common)


@dataclass
class GraphView:
    """``G - F``: deletion masks over a shared base graph, nothing is copied."""

    base: Graph
    dead_vertices: frozenset[int] = frozenset()
    dead_edges: frozenset[int] = frozenset()
    _alive: list[bool] = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        alive = [True] * self.base.order
        for v in self.dead_vertices:
            alive[v] = False
        self._alive = alive

    @property
    def order(self) -> int:
        return self.base.order - len(self.dead_vertices)

    def is_alive(self, v: int) -> bool:
        return self._alive[v]

    def vertices(self) -> Iterator[int]:
        return (v for v in range(self.base.order) if self._alive[v])

    def edge_alive(self, u: int, w: int, eid: int) -> bool:
        return self._alive[u] and self._alive[w] and eid not in self.dead_edges

    def neighbors(self, v: int) -> list[int]:
        if not self._alive[v]:
            return []
        alive, dead = self._alive, self.dead_edges
        return [w for w, e in self.base.adj[v] if alive[w] and e not in dead]

    def edges(self) -> Iterator[Edge]:
        alive, dead = self._alive, self.dead_edges
        for k, (u, v) in enumerate(self.base.edges):
            if alive[u] and alive[v] and k not in dead:
                yield (u, v)

    def size(self) -> int:
        return sum(1 for _ in self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        k = self.base.edge_id.get(canon(u, v))
        return k is not None and self.edge_alive(u, v, k)

    def side_counts(self) -> tuple[int, int]:
        counts = [0, 0]
        for v in self.vertices():
            counts[self.base.side[v]] += 1
        return counts[0], counts[1]


def apply_faults(g: Graph | GraphView, faults: FaultSet) -> GraphView:
    """Return the view ``g - F``; vertex deletions also drop their incident edges."""
    base = g.base if isinstance(g, GraphView) else g
    faults.validate(base)
    dead_v = set(faults.vertices)
    dead_e = {base.edge_id[e] for e in faults.edges}
    if isinstance(g, GraphView):
        dead_v |= g.dead_vertices
        dead_e |= g.dead_edges
    return GraphView(base, frozenset(dead_v), frozenset(dead_e))


def full_view(g: Graph | GraphView) -> GraphView:
    return g if isinstance(g, GraphView) else GraphView(g)
