"""Hamiltonian path search and the stitched perfect-matching construction.

:func:`ham_path` is a depth-first search with Warnsdorff ordering (fewest
unvisited neighbors first) and forward pruning: a vertex other than the
target end that is left with at most one usable neighbor is a dead end, and a
neighbor of the current end with exactly one other unvisited neighbor must be
visited next.

:func:`stitched_pm` turns a structured non-trivial edge fault ``F`` of
``BS_n`` (``n >= 5``) into a perfect matching of ``BS_n - F``: it chains one
Hamiltonian path per copy ``BS_n^k`` through surviving cross edges into a
Hamiltonian path of ``BS_n - F`` and takes every other edge.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .cayley import (
    CayleyGraph,
    build,
    canonical_matchings,
    drop_last,
    lift,
    subgraph,
)
from .graph import Edge, FaultSet, Graph, GraphView, apply_faults, canon, full_view
from .matching import PERFECT, Matching, verify_matching
from .permcore import Transposition, rank_entries

DEFAULT_NODE_BUDGET = 10**6
RETRY_CAP = 32

FOUND = "found"
BUDGET_EXHAUSTED = "budget-exhausted"
PARITY_OBSTRUCTION = "parity-obstruction"
NO_PATH = "no-path"


class ConstructionError(RuntimeError):
    """A stitched construction could not be completed."""

    def __init__(self, message: str, copy_index: int | None = None) -> None:
        super().__init__(message)
        self.copy_index = copy_index


@dataclass(frozen=True)
class HamPath:
    vertices: tuple[int, ...]
    host: Graph | GraphView

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Edge]:
        v = self.vertices
        return [canon(v[k], v[k + 1]) for k in range(len(v) - 1)]

    def verify(self) -> bool:
        return verify_path(self.host, self.vertices)

    def labels(self) -> list[str]:
        base = full_view(self.host).base
        return [base.label(v) for v in self.vertices]


def verify_path(host: Graph | GraphView, vertices: Sequence[int]) -> bool:
    """Distinct, consecutive-adjacent, and covering every live vertex."""
    view = full_view(host)
    if len(set(vertices)) != len(vertices) or len(vertices) != view.order:
        return False
    if any(not view.is_alive(v) for v in vertices):
        return False
    return all(view.has_edge(vertices[k], vertices[k + 1]) for k in range(len(vertices) - 1))


@dataclass
class PathSearch:
    status: str
    path: HamPath | None
    nodes: int

    def __bool__(self) -> bool:
        return self.path is not None


def parity_obstructed(view: GraphView, a: int, b: int) -> bool:
    s0, s1 = view.side_counts()
    side = view.base.side
    if abs(s0 - s1) > 1:
        return True
    if view.order % 2 == 0:
        return side[a] == side[b]
    major = 0 if s0 > s1 else 1
    return not (side[a] == major and side[b] == major)


def ham_path(
    g: Graph | GraphView, a: int, b: int, budget: int = DEFAULT_NODE_BUDGET
) -> PathSearch:
    """Search a Hamiltonian path of ``g`` from ``a`` to ``b``."""
    view = full_view(g)
    base = view.base
    base.check_vertex(a)
    base.check_vertex(b)
    if a == b:
        raise ValueError("path endpoints must differ")
    if not (view.is_alive(a) and view.is_alive(b)):
        raise ValueError("path endpoint was deleted")
    if parity_obstructed(view, a, b):
        return PathSearch(PARITY_OBSTRUCTION, None, 0)

    nbrs = {v: view.neighbors(v) for v in view.vertices()}
    total = len(nbrs)
    visited = dict.fromkeys(nbrs, False)
    deg = {v: len(ns) for v, ns in nbrs.items()}

    def visit(v: int) -> None:
        visited[v] = True
        for w in nbrs[v]:
            deg[w] -= 1

    def unvisit(v: int) -> None:
        visited[v] = False
        for w in nbrs[v]:
            deg[w] += 1

    def moves(head: int, prev: int | None, count: int) -> list[int]:
        """Pruned, ordered candidate successors of ``head``."""
        if head == b:
            return []
        if count == total - 1:
            return [b] if b in nbrs[head] and not visited[b] else []
        head_nbrs = nbrs[head]
        # the old end's neighbors just lost their spare way in
        if prev is not None:
            for x in nbrs[prev]:
                if not visited[x] and x != b and deg[x] + (x in head_nbrs) < 2:
                    return []
        forced = None
        cands = []
        for x in head_nbrs:
            if visited[x] or x == b:
                continue
            if deg[x] == 0:
                return []
            if deg[x] == 1:
                if forced is not None:
                    return []
                forced = x
            cands.append(x)
        if not visited[b] and deg[b] == 0 and b not in head_nbrs:
            return []
        if forced is not None:
            return [forced]
        cands.sort(key=lambda x: (deg[x], x))
        return cands

    path = [a]
    visit(a)
    stack = [iter(moves(a, None, 1))]
    nodes = 0
    while stack:
        if len(path) == total and path[-1] == b:
            hp = HamPath(tuple(path), g)
            if not hp.verify():
                raise AssertionError("search produced an invalid path")
            return PathSearch(FOUND, hp, nodes)
        x = next(stack[-1], None)
        if x is None:
            stack.pop()
            unvisit(path.pop())
            continue
        nodes += 1
        if nodes > budget:
            return PathSearch(BUDGET_EXHAUSTED, None, nodes)
        prev = path[-1]
        path.append(x)
        visit(x)
        stack.append(iter(moves(x, prev, len(path))))
    return PathSearch(NO_PATH, None, nodes)


def pm_from_path(path: HamPath | Sequence[int]) -> Matching:
    """Every other edge of a path, starting with the first."""
    vs = path.vertices if isinstance(path, HamPath) else tuple(path)
    if len(vs) % 2:
        raise ValueError(f"path covers an odd number ({len(vs)}) of vertices")
    return Matching((vs[k], vs[k + 1]) for k in range(0, len(vs), 2))


# --------------------------------------------------------------------------
# structured faults


@dataclass(frozen=True)
class StructuredFault:
    """``F`` = a vertex ``u`` cut off inside its copy, plus one edge of ``M+`` and one of ``M-``."""

    copy_index: int
    u: int
    inner: frozenset[Edge]
    plus_edge: Edge
    minus_edge: Edge
    trivial: bool

    def faults(self) -> FaultSet:
        return FaultSet(edges=self.inner | {self.plus_edge, self.minus_edge})


@dataclass(frozen=True)
class Rejection:
    reason: str

    def __bool__(self) -> bool:
        return False


def _copy_of_edge(g: CayleyGraph, e: Edge) -> int | None:
    a, b = g.last(e[0]), g.last(e[1])
    return a if a == b else None


def decompose_fault(g: CayleyGraph, faults: FaultSet) -> StructuredFault | Rejection:
    """Recognize ``F`` as an isolated-in-copy vertex plus one ``M+`` and one ``M-`` edge."""
    n = g.n
    if n < 4:
        return Rejection("needs n >= 4")
    if faults.vertices:
        return Rejection("vertex faults present")
    faults.validate(g)
    edges = faults.edges
    if len(edges) != 2 * n - 3:
        return Rejection(f"|F| = {len(edges)}, expected {2 * n - 3}")
    plus, minus = canonical_matchings(g)
    in_plus = sorted(edges & plus.edges)
    in_minus = sorted(edges & minus.edges)
    if not in_plus:
        return Rejection("F misses M+ (M+ survives)")
    if not in_minus:
        return Rejection("F misses M- (M- survives)")
    by_copy: dict[int, list[Edge]] = {}
    for e in edges:
        k = _copy_of_edge(g, e)
        if k is not None:
            by_copy.setdefault(k, []).append(e)
    inner_size = 2 * n - 5
    heavy = [k for k, es in sorted(by_copy.items()) if len(es) == inner_size]
    if not heavy:
        return Rejection(f"no copy carries {inner_size} faulty inner edges")
    j = heavy[0]
    inner = frozenset(by_copy[j])
    common = set.intersection(*({u, v} for u, v in inner))
    if len(common) != 1:
        return Rejection("inner faults do not share one vertex")
    u = common.pop()
    if len(in_plus) != 1 or len(in_minus) != 1:
        return Rejection("expected exactly one faulty edge in each of M+ and M-")
    pe, me = in_plus[0], in_minus[0]
    trivial = u in pe and u in me
    return StructuredFault(j, u, inner, pe, me, trivial)


def structured_fault(g: CayleyGraph, u: int, plus_edge: Edge, minus_edge: Edge) -> StructuredFault:
    j = g.last(u)
    inner = frozenset(canon(u, w) for w in g.neighbor_indices(u) if g.last(w) == j)
    pe, me = canon(*plus_edge), canon(*minus_edge)
    return StructuredFault(j, u, inner, pe, me, u in pe and u in me)


def random_structured_fault(g: CayleyGraph, rng: random.Random, trivial: bool = False) -> StructuredFault:
    plus, minus = canonical_matchings(g)
    u = rng.randrange(g.order)
    if trivial:
        pe = canon(u, g.step(u, Transposition(1, g.n)))
        me = canon(u, g.step(u, Transposition(g.n - 1, g.n)))
        return structured_fault(g, u, pe, me)
    plus_edges, minus_edges = plus.sorted_edges(), minus.sorted_edges()
    while True:
        pe, me = rng.choice(plus_edges), rng.choice(minus_edges)
        if not (u in pe and u in me):
            return structured_fault(g, u, pe, me)


# --------------------------------------------------------------------------
# stitching


class _CopyPaths:
    """Hamiltonian paths inside copies, solved once on the ``n-1`` graph."""

    def __init__(self, g: CayleyGraph, budget: int) -> None:
        self.g = g
        self.small = build(g.generators.restricted())
        self.budget = budget
        self.memo: dict[tuple[int, int], tuple[int, ...] | None] = {}

    def path(self, a: int, b: int) -> list[int] | None:
        g, small = self.g, self.small
        i = g.last(a)
        sa = rank_entries(drop_last(g.entries(a)))
        sb = rank_entries(drop_last(g.entries(b)))
        if (sa, sb) not in self.memo:
            res = ham_path(small, sa, sb, self.budget)
            self.memo[(sa, sb)] = res.path.vertices if res.path else None
        found = self.memo[(sa, sb)]
        if found is None:
            return None
        return [rank_entries(lift(small.entries(v), i)) for v in found]


def stitched_path(
    g: CayleyGraph,
    sf: StructuredFault,
    budget: int = DEFAULT_NODE_BUDGET,
    retry_cap: int = RETRY_CAP,
) -> HamPath:
    """Hamiltonian path of ``BS_n - F`` from ``u`` through every copy."""
    n = g.n
    if n < 5:
        raise ValueError("stitched construction needs n >= 5")
    if sf.trivial:
        raise ValueError("trivial fault set: u is isolated, no perfect matching exists")
    faults = sf.faults()
    fault_edges = faults.edges
    u, j = sf.u, sf.copy_index
    side = g.side
    outer = [Transposition(1, n), Transposition(n - 1, n)]
    copies = _CopyPaths(g, budget)
    host = apply_faults(g, faults)

    def exits(s: int, t: int) -> list[Edge]:
        # cross edges s -> t leaving s from u's class
        out = []
        for x in subgraph(g, [s]).members:
            if side[x] != side[u]:
                continue
            for tr in outer:
                y = g.step(x, tr)
                if g.last(y) == t and canon(x, y) not in fault_edges:
                    out.append((x, y))
        return sorted(out, key=lambda xy: canon(*xy))

    v2_choices = sorted(
        (v for v in (g.step(u, tr) for tr in outer) if canon(u, v) not in fault_edges)
    )
    last_failed = None
    tries = 0
    for v2 in v2_choices:
        first = g.last(v2)
        chain = [first] + [k for k in range(1, n + 1) if k not in (j, first)] + [j]
        links = [exits(chain[k], chain[k + 1]) for k in range(len(chain) - 1)]
        for assignment in product(*links):
            tries += 1
            if tries > retry_cap:
                raise ConstructionError(
                    f"no stitching within {retry_cap} cross-edge assignments", last_failed
                )
            entry = v2
            walk = [u]
            ok = True
            for k, (x, y) in enumerate(assignment):
                seg = copies.path(entry, x)
                if seg is None:
                    ok, last_failed = False, chain[k]
                    break
                walk.extend(seg)
                entry = y
            if not ok:
                continue
            tail = copies.path(entry, u)
            if tail is None:
                last_failed = j
                continue
            walk.extend(tail[:-1])
            hp = HamPath(tuple(walk), host)
            if not hp.verify():
                raise AssertionError("stitched walk is not a Hamiltonian path of G - F")
            return hp
    raise ConstructionError("no admissible stitching found", last_failed)


def stitched_pm(g: CayleyGraph, sf: StructuredFault, budget: int = DEFAULT_NODE_BUDGET) -> Matching:
    """Perfect matching of ``BS_n - F`` for a non-trivial structured fault."""
    hp = stitched_path(g, sf, budget)
    m = pm_from_path(hp)
    check = verify_matching(hp.host, m, PERFECT)
    if not check:
        raise AssertionError(f"stitched matching failed verification: {check.reason}")
    return m
