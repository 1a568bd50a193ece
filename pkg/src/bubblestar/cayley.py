"""Transposition Cayley graphs, centrally the bubble-sort star graph.

Vertices of a :class:`CayleyGraph` are indexed by lexicographic rank, so
vertex ``0`` is always the identity.  ``u ~ v`` iff ``u = v o t`` for some
generator ``t`` (a position swap).

``BS_n`` uses the star moves ``<1,i>`` (``2 <= i <= n``) and the bubble
moves ``<i-1,i>`` (``3 <= i <= n``); its generating graph is a star overlaid
with a path, and it is ``(2n-3)``-regular on ``n!`` vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from .graph import Edge, Graph, GraphError, canon
from .permcore import (
    Permutation,
    PermutationError,
    Transposition,
    all_permutations,
    parity_bit,
    rank_entries,
    relabel,
    swap,
    unrank_entries,
)

BUBBLE_SORT_STAR = "bubble-sort-star"
CUSTOM = "custom"

#: Largest n whose adjacency is materialized eagerly.
EAGER_MAX_N = 7
#: Default construction cap.
DEFAULT_MAX_N = 9


class ResourceLimitError(RuntimeError):
    """The requested graph exceeds the construction budget."""


@dataclass(frozen=True)
class GeneratingGraph:
    """A set ``T`` of transpositions, read as a graph on positions ``[1, n]``."""

    n: int
    transpositions: tuple[Transposition, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise PermutationError("generating graph needs n >= 2")
        ts = []
        for t in self.transpositions:
            if not isinstance(t, Transposition):
                t = Transposition(*t)
            t.check(self.n)
            ts.append(t)
        if len(set(ts)) != len(ts):
            raise PermutationError("duplicate transposition in generating set")
        if not ts:
            raise PermutationError("empty generating set")
        object.__setattr__(self, "transpositions", tuple(sorted(ts)))

    @property
    def connected(self) -> bool:
        parent = list(range(self.n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in self.transpositions:
            parent[find(t.i)] = find(t.j)
        return len({find(x) for x in range(1, self.n + 1)}) == 1

    def __len__(self) -> int:
        return len(self.transpositions)

    def restricted(self) -> GeneratingGraph:
        """Generators acting on positions ``[1, n-1]`` only."""
        return GeneratingGraph(self.n - 1, tuple(t for t in self.transpositions if t.j < self.n))

    def spec(self) -> str:
        return " ".join(f"{t.i}-{t.j}" for t in self.transpositions)


def bs_generators(n: int) -> GeneratingGraph:
    """Generating set of ``BS_n``: ``{<1,i> : 2<=i<=n} U {<i-1,i> : 3<=i<=n}``."""
    if n < 2:
        raise PermutationError("BS_n requires n >= 2")
    ts = [Transposition(1, i) for i in range(2, n + 1)]
    ts += [Transposition(i - 1, i) for i in range(3, n + 1)]
    return GeneratingGraph(n, tuple(ts))


class CayleyGraph(Graph):
    """Cayley graph of ``S_n`` for a transposition generating set.

    Adjacency is materialized at construction for ``n <= EAGER_MAX_N`` and on
    first access of ``adj``/``edges`` otherwise; :func:`neighbors` never needs it.
    """

    def __init__(self, generators: GeneratingGraph, family: str = CUSTOM) -> None:
        self.n = generators.n
        self.generators = generators
        self.family = family
        self.order = factorial(self.n)
        self._perms: list[tuple[int, ...]] | None = None
        if self.n <= EAGER_MAX_N:
            self._materialize()

    def __getattr__(self, name: str):
        if name in ("edges", "edge_id", "adj", "side"):
            self._materialize()
            return self.__dict__[name]
        raise AttributeError(name)

    def _materialize(self) -> None:
        perms = self.perms
        index = {p: k for k, p in enumerate(perms)}
        gens = [(t.i, t.j) for t in self.generators.transpositions]
        edges = []
        for k, p in enumerate(perms):
            for i, j in gens:
                w = index[swap(p, i, j)]
                if k < w:
                    edges.append((k, w))
        edges.sort()
        self._init_edges(edges)
        self.side = [parity_bit(p) for p in perms]

    @property
    def perms(self) -> list[tuple[int, ...]]:
        if self._perms is None:
            self._perms = list(all_permutations(self.n))
        return self._perms

    @property
    def materialized(self) -> bool:
        return "adj" in self.__dict__

    def entries(self, v: int) -> tuple[int, ...]:
        if self._perms is not None:
            return self._perms[v]
        return unrank_entries(v, self.n)

    def perm(self, v: int) -> Permutation:
        self.check_vertex(v)
        return Permutation(self.entries(v))

    def index(self, p: Permutation | Sequence[int] | str) -> int:
        if isinstance(p, str):
            p = Permutation.parse(p)
        entries = p.entries if isinstance(p, Permutation) else tuple(p)
        if len(entries) != self.n:
            raise GraphError(f"{entries} is not a vertex of a graph with n={self.n}")
        Permutation(entries)
        return rank_entries(entries)

    def label(self, v: int) -> str:
        return str(self.perm(v))

    def edge_labels(self, e: Sequence[int]) -> tuple[str, str]:
        return (self.label(e[0]), self.label(e[1]))

    def last(self, v: int) -> int:
        return self.entries(v)[-1]

    def neighbor_indices(self, v: int) -> list[int]:
        """Neighbors of vertex index ``v`` computed from the generators."""
        p = self.entries(v)
        return sorted(
            rank_entries(swap(p, t.i, t.j)) for t in self.generators.transpositions
        )

    def step(self, v: int, t: Transposition) -> int:
        """Index of ``perm(v) o t``."""
        return rank_entries(swap(self.entries(v), t.i, t.j))

    def generator_of(self, e: Sequence[int]) -> Transposition:
        a, b = self.entries(e[0]), self.entries(e[1])
        diff = [k + 1 for k in range(self.n) if a[k] != b[k]]
        if len(diff) != 2 or Transposition(*diff) not in self.generators.transpositions:
            raise GraphError(f"{tuple(e)} is not an edge")
        return Transposition(*diff)

    @property
    def degree_value(self) -> int:
        return len(self.generators)

    def edge_count(self) -> int:
        return self.order * len(self.generators) // 2

    def __repr__(self) -> str:
        return f"CayleyGraph(n={self.n}, family={self.family!r}, |T|={len(self.generators)})"


def build(gen: GeneratingGraph, max_n: int = DEFAULT_MAX_N, family: str | None = None) -> CayleyGraph:
    """Cayley graph on all ``n!`` permutations generated by ``gen``."""
    if gen.n > max_n:
        raise ResourceLimitError(f"n={gen.n} exceeds construction cap n <= {max_n}")
    if family is None:
        family = BUBBLE_SORT_STAR if gen == bs_generators(gen.n) else CUSTOM
    return CayleyGraph(gen, family)


def bubble_sort_star(n: int, max_n: int = DEFAULT_MAX_N) -> CayleyGraph:
    return build(bs_generators(n), max_n=max_n)


def neighbors(g: CayleyGraph, v: Permutation | str) -> set[Permutation]:
    if isinstance(v, str):
        v = Permutation.parse(v)
    if v.n != g.n:
        raise GraphError(f"{v} is not a vertex of a graph with n={g.n}")
    return {Permutation(swap(v.entries, t.i, t.j)) for t in g.generators.transpositions}


def bipartition(g: CayleyGraph) -> tuple[frozenset[Permutation], frozenset[Permutation]]:
    """(even permutations, odd permutations)."""
    even, odd = [], []
    for v in range(g.order):
        p = g.entries(v)
        (odd if parity_bit(p) else even).append(Permutation(p))
    return frozenset(even), frozenset(odd)


@dataclass(frozen=True)
class SubgraphHandle:
    """Induced subgraph on vertices whose last entry lies in ``last_entries``."""

    parent: CayleyGraph
    last_entries: frozenset[int]
    members: tuple[int, ...]

    def __contains__(self, v: int) -> bool:
        return self.parent.last(v) in self.last_entries

    def edges(self) -> list[Edge]:
        g, keep = self.parent, self.last_entries
        return [e for e in g.edges if g.last(e[0]) in keep and g.last(e[1]) in keep]

    def __len__(self) -> int:
        return len(self.members)


def subgraph(g: CayleyGraph, last_entries: Iterable[int]) -> SubgraphHandle:
    keep = frozenset(int(i) for i in last_entries)
    if not keep:
        raise GraphError("empty last-entry set")
    if not keep <= set(range(1, g.n + 1)):
        raise GraphError(f"last entries {sorted(keep)} outside [1, {g.n}]")
    members = tuple(v for v in range(g.order) if g.last(v) in keep)
    return SubgraphHandle(g, keep, members)


def drop_last(entries: Sequence[int]) -> tuple[int, ...]:
    """Remove the last entry and relabel the rest monotonically onto ``[1, n-1]``."""
    i = entries[-1]
    return tuple(x - 1 if x > i else x for x in entries[:-1])


def lift(entries: Sequence[int], i: int) -> tuple[int, ...]:
    """Inverse of :func:`drop_last` for the copy with last entry ``i``."""
    return tuple(x + 1 if x >= i else x for x in entries) + (i,)


def subgraph_isomorphism(g: CayleyGraph, i: int) -> dict[Permutation, Permutation]:
    """Explicit isomorphism from the copy with last entry ``i`` onto the ``n-1`` graph."""
    if g.n < 3:
        raise GraphError("subgraph isomorphism needs n >= 3")
    if not 1 <= i <= g.n:
        raise GraphError(f"copy index {i} outside [1, {g.n}]")
    return {
        g.perm(v): Permutation(drop_last(g.entries(v)))
        for v in subgraph(g, [i]).members
    }


def cross_edges(g: CayleyGraph, i: int, j: int) -> list[Edge]:
    """Edges joining the copies with last entries ``i`` and ``j``."""
    if g.n < 3:
        raise GraphError("cross edges need n >= 3")
    if i == j:
        raise GraphError("cross edges need i != j")
    for x in (i, j):
        if not 1 <= x <= g.n:
            raise GraphError(f"copy index {x} outside [1, {g.n}]")
    out = []
    for v in range(g.order):
        if g.last(v) != i:
            continue
        for w in g.neighbor_indices(v):
            if g.last(w) == j:
                out.append(canon(v, w))
    return sorted(out)


def canonical_matchings(g: CayleyGraph):
    """``(M+, M-)``: every vertex paired with ``v o <1,n>`` resp. ``v o <n-1,n>``."""
    from .matching import Matching

    if g.n < 3:
        raise GraphError("canonical matchings need n >= 3")
    plus_t, minus_t = Transposition(1, g.n), Transposition(g.n - 1, g.n)
    for t in (plus_t, minus_t):
        if t not in g.generators.transpositions:
            raise GraphError(f"{t} is not a generator of this graph")
    plus = {canon(v, g.step(v, plus_t)) for v in range(g.order)}
    minus = {canon(v, g.step(v, minus_t)) for v in range(g.order)}
    return Matching(plus), Matching(minus)


def relabel_automorphism(g: CayleyGraph, sigma: Permutation | Sequence[int] | str) -> list[int]:
    """Vertex map ``w -> sigma(w_1) ... sigma(w_n)`` as an index list."""
    if isinstance(sigma, str):
        sigma = Permutation.parse(sigma)
    s = sigma.entries if isinstance(sigma, Permutation) else tuple(Permutation(tuple(sigma)).entries)
    if len(s) != g.n:
        raise GraphError(f"relabeling of length {len(s)} for n={g.n}")
    return [rank_entries(relabel(s, g.entries(v))) for v in range(g.order)]


def transporter(a: Permutation, b: Permutation) -> Permutation:
    """The relabeling ``sigma`` with ``sigma(a_k) = b_k`` for every position ``k``."""
    if a.n != b.n:
        raise PermutationError("dimension mismatch")
    s = [0] * a.n
    for x, y in zip(a.entries, b.entries):
        s[x - 1] = y
    return Permutation(tuple(s))


# Named edges of BS_3, as drawn in the usual six-cycle picture with three chords.
BS3_ALIASES: dict[str, tuple[str, str]] = {
    "a": ("123", "132"),
    "b": ("132", "312"),
    "c": ("312", "321"),
    "d": ("321", "231"),
    "e": ("231", "213"),
    "f": ("123", "213"),
    "g": ("123", "321"),
    "h": ("132", "231"),
    "p": ("213", "312"),
}


def bs3_alias_edges(g: CayleyGraph) -> dict[str, Edge]:
    if g.n != 3 or g.family != BUBBLE_SORT_STAR:
        raise GraphError("edge aliases a..p exist for BS_3 only")
    return {k: canon(g.index(u), g.index(v)) for k, (u, v) in BS3_ALIASES.items()}


def bs3_edge_alias(g: CayleyGraph, e: Sequence[int]) -> str:
    inverse = {v: k for k, v in bs3_alias_edges(g).items()}
    return inverse[canon(e[0], e[1])]
