"""Exact matching preclusion (mp) and strong matching preclusion (smp).

A fault set precludes when ``G - F`` has no perfect matching (even order) and
no almost-perfect matching (odd order).  Two independent routes are provided:

* :func:`mp` / :func:`smp`: iterative deepening with hitting-set branching.
  Any preclusion set must contain an edge of every surviving maximum
  matching, so each node branches only on the edges of one freshly computed
  matching; branch ``i`` deletes edge ``e_i`` and forbids ``e_1..e_{i-1}``,
  which makes the leaves pairwise distinct.  On an intact-vertex ``BS_n``
  the canonical matchings ``M+``/``M-`` are tried first: while one survives
  the node branches on it without a matching computation, so every hit
  meets both of them.
* :func:`scan_edge_subsets` / :func:`scan_mixed_subsets`: literal enumeration
  of every subset of a given size, in lexicographic order, filtered by
  bitmasks of already known surviving matchings.

Budgets count matching computations.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .cayley import BUBBLE_SORT_STAR, CayleyGraph, canonical_matchings, relabel_automorphism
from .graph import Edge, FaultSet, Graph, GraphView, apply_faults, canon, full_view
from .matching import hopcroft_karp, max_matching
from .permcore import all_permutations

MP = "mp"
SMP = "smp"

DEFAULT_BUDGET = 10**8
THREADS_ENV = "BUBBLESTAR_THREADS"
#: Automorphism tables are built only up to this many vertices.
SYMMETRY_MAX_ORDER = 720


class BudgetExceeded(Exception):
    pass


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def target_coverage(order: int) -> int:
    """Matched-vertex count of a PM (even order) or an APM (odd order)."""
    return order - (order % 2)


def imbalance_precludes(view: GraphView) -> bool:
    """Side sizes rule out both PM and APM without any search."""
    a, b = view.side_counts()
    return abs(a - b) >= 2


def is_preclusion_set(g: Graph | GraphView, faults: FaultSet) -> bool:
    view = apply_faults(g, faults)
    if imbalance_precludes(view):
        return True
    return max_matching(view).coverage < target_coverage(view.order)


def surviving_matching(g: Graph | GraphView, faults: FaultSet):
    """A PM/APM of ``G - F`` or ``None`` when ``F`` precludes."""
    view = apply_faults(g, faults)
    m = max_matching(view)
    return m if m.coverage >= target_coverage(view.order) else None


@dataclass
class PreclusionReport:
    kind: str
    value: int | None
    optimal_sets: list[FaultSet]
    complete: bool
    classification: bool | None
    lower_bound: int
    upper_bound: int | None
    matching_calls: int = 0
    seconds: float = 0.0
    enumerate_all: bool = False
    symmetry: bool = False

    @property
    def all_trivial(self) -> bool | None:
        return self.classification if self.kind == MP else None

    @property
    def all_same_side_vertex_pairs(self) -> bool | None:
        return self.classification if self.kind == SMP else None

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value,
            "complete": self.complete,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "enumerate_all": self.enumerate_all,
            "symmetry": self.symmetry,
            "classification": self.classification,
            "optimal_sets": [fault_to_dict(f) for f in self.optimal_sets],
            "matching_calls": self.matching_calls,
        }
        if include_timing:
            out["seconds"] = self.seconds
        return out


def fault_to_dict(f: FaultSet) -> dict:
    return {"vertices": sorted(f.vertices), "edges": [list(e) for e in sorted(f.edges)]}


def fault_from_dict(d: dict) -> FaultSet:
    return FaultSet(frozenset(d.get("vertices", ())), frozenset(tuple(e) for e in d.get("edges", ())))


# --------------------------------------------------------------------------
# hitting-set search


class _HittingSearch:
    """Enumerate edge sets of a fixed size that leave no PM/APM in a view."""

    def __init__(self, view: GraphView, budget: int, calls: int = 0) -> None:
        self.view = view
        self.base = view.base
        self.target = target_coverage(view.order)
        self.unbalanced = imbalance_precludes(view)
        self.budget = budget
        self.calls = calls
        self.seeds = _seed_matchings(view)

    def _match(self, dead: set[int], mate: list[int]) -> int:
        self.calls += 1
        if self.calls > self.budget:
            raise BudgetExceeded
        return 2 * hopcroft_karp(self.base.adj, self.base.side, self.view._alive, dead, mate)

    def _matched_edges(self, mate: list[int]) -> list[int]:
        eid = self.base.edge_id
        return sorted(eid[(v, w)] for v, w in enumerate(mate) if w > v)

    def run(
        self,
        depth: int,
        collect: bool,
        root_branches: Sequence[int] | None = None,
        universe: Sequence[int] | None = None,
    ) -> list[tuple[int, ...]]:
        """Edge-id sets of size exactly ``depth`` that preclude.

        With ``collect`` false the search stops at the first hit.
        ``root_branches`` replaces the first branching list (symmetry reduction).
        ``universe`` lists edges allowed as padding once a smaller set already
        precludes (defaults to every edge of the base graph).
        """
        if universe is None:
            universe = range(self.base.size)
        self.universe = list(universe)
        self.found: list[tuple[int, ...]] = []
        self.collect = collect
        mate = [-1] * self.base.order
        self._node([], set(), set(self.view.dead_edges), mate, depth, root_branches)
        return sorted(self.found)

    def _node(self, chosen, forbidden, dead, mate, depth, branches=None) -> bool:
        seed = None if self.unbalanced else next((m for m in self.seeds if dead.isdisjoint(m)), None)
        if seed is not None:
            if depth == 0:
                return False
            mate = [-1] * self.base.order
            for e in seed:
                u, v = self.base.edges[e]
                mate[u], mate[v] = v, u
            if branches is None:
                branches = list(seed)
        else:
            covered = 0 if self.unbalanced else self._match(dead, mate)
            if covered < self.target:
                return self._emit(chosen, forbidden, depth)
            if depth == 0:
                return False
            if branches is None:
                branches = self._matched_edges(mate)
        branches = [e for e in branches if e not in forbidden]
        hit = False
        for idx, e in enumerate(branches):
            u, v = self.base.edges[e]
            child_mate = list(mate)
            if child_mate[u] == v:
                child_mate[u] = child_mate[v] = -1
            dead.add(e)
            chosen.append(e)
            new_forbidden = forbidden | set(branches[:idx])
            try:
                if self._node(chosen, new_forbidden, dead, child_mate, depth - 1):
                    hit = True
                    if not self.collect:
                        return True
            finally:
                chosen.pop()
                dead.discard(e)
        return hit

    def _emit(self, chosen, forbidden, depth) -> bool:
        # pad a smaller preclusion set up to the requested size
        if depth == 0:
            self.found.append(tuple(sorted(chosen)))
            return True
        taken = set(chosen) | forbidden
        pool = [e for e in self.universe if e not in taken]
        emitted = False
        for extra in combinations(pool, depth):
            self.found.append(tuple(sorted(chosen + list(extra))))
            emitted = True
            if not self.collect:
                break
        return emitted


def _seed_matchings(view: GraphView) -> list[tuple[int, ...]]:
    base = view.base
    if not (isinstance(base, CayleyGraph) and base.family == BUBBLE_SORT_STAR and base.n >= 3):
        return []
    if view.dead_vertices:
        return []
    eid = base.edge_id
    return [tuple(sorted(eid[e] for e in m.edges)) for m in canonical_matchings(base)]


def edge_sets_to_faults(base: Graph, sets: Iterable[Sequence[int]], vertices=()) -> list[FaultSet]:
    return [FaultSet(frozenset(vertices), frozenset(base.edges[e] for e in s)) for s in sets]


# --------------------------------------------------------------------------
# symmetry


def automorphism_table(g: Graph) -> list[list[int]] | None:
    """All value-relabeling automorphisms of a Cayley graph (``None`` otherwise)."""
    if not isinstance(g, CayleyGraph) or g.order > SYMMETRY_MAX_ORDER:
        return None
    return [relabel_automorphism(g, sigma) for sigma in all_permutations(g.n)]


def _image(f: FaultSet, amap: Sequence[int]) -> FaultSet:
    return FaultSet(
        frozenset(amap[v] for v in f.vertices),
        frozenset(canon(amap[u], amap[v]) for u, v in f.edges),
    )


def _canonical_key(f: FaultSet, table: Sequence[Sequence[int]]):
    return min((_image(f, amap) for amap in table), key=FaultSet.sort_key)


def symmetry_orbits(g: CayleyGraph, candidate_sets: Iterable[FaultSet]) -> list[list[FaultSet]]:
    """Partition candidate fault sets into relabeling orbits.

    Orbits are listed by their smallest member; each orbit is sorted.
    """
    table = [relabel_automorphism(g, sigma) for sigma in all_permutations(g.n)]
    groups: dict = {}
    for f in candidate_sets:
        groups.setdefault(_canonical_key(f, table), []).append(f)
    orbits = [sorted(set(members), key=FaultSet.sort_key) for members in groups.values()]
    return sorted(orbits, key=lambda o: o[0].sort_key())


def orbit_of(f: FaultSet, table: Sequence[Sequence[int]]) -> set[FaultSet]:
    return {_image(f, amap) for amap in table}


def edge_orbit_representatives(g: Graph, table) -> list[int]:
    seen: set[Edge] = set()
    reps = []
    for k, e in enumerate(g.edges):
        if e in seen:
            continue
        reps.append(k)
        for amap in table:
            seen.add(canon(amap[e[0]], amap[e[1]]))
    return reps


def vertex_set_representatives(g: Graph, r: int, table) -> list[tuple[int, ...]]:
    seen: set[tuple[int, ...]] = set()
    reps = []
    for d in combinations(range(g.order), r):
        if d in seen:
            continue
        reps.append(d)
        for amap in table:
            seen.add(tuple(sorted(amap[v] for v in d)))
    return reps


# --------------------------------------------------------------------------
# mp / smp


def _edges_only_level(view, k, budget, calls, collect, table, universe=None):
    search = _HittingSearch(view, budget, calls)
    roots = None
    if table is not None and k >= 1 and not collect:
        roots = edge_orbit_representatives(view.base, table)
    try:
        found = search.run(k, collect, root_branches=roots, universe=universe)
    finally:
        calls = search.calls
    return found, calls


def mp(
    g: Graph | GraphView,
    budget: int = DEFAULT_BUDGET,
    enumerate_all: bool = False,
    symmetry: bool = False,
    max_k: int | None = None,
) -> PreclusionReport:
    """Exact matching preclusion number by iterative deepening."""
    start = time.perf_counter()
    view = full_view(g)
    base = view.base
    table = automorphism_table(base) if symmetry and not view.dead_vertices and not view.dead_edges else None
    calls = 0
    limit = view.size() if max_k is None else max_k
    lower = 0
    report = None
    try:
        for k in range(0, limit + 1):
            universe = [base.edge_id[e] for e in view.edges()]
            found, calls = _edges_only_level(view, k, budget, calls, enumerate_all, table, universe)
            if found:
                sets = edge_sets_to_faults(base, found)
                triv = all(f.is_trivial(base) is not None for f in sets) if k else False
                report = PreclusionReport(
                    MP, k, sets, True, triv if enumerate_all else None, k, k,
                    calls, enumerate_all=enumerate_all, symmetry=symmetry,
                )
                break
            lower = k + 1
    except BudgetExceeded:
        report = PreclusionReport(MP, None, [], False, None, lower, None, budget,
                                  enumerate_all=enumerate_all, symmetry=symmetry)
    if report is None:
        report = PreclusionReport(MP, None, [], False, None, lower, None, calls,
                                  enumerate_all=enumerate_all, symmetry=symmetry)
    report.seconds = time.perf_counter() - start
    return report


def classify_optimal_mp_sets(
    g: Graph | GraphView, k: int, budget: int = DEFAULT_BUDGET, symmetry: bool = False
) -> tuple[list[FaultSet], bool, bool]:
    """All ``k``-edge preclusion sets, whether all are trivial, and completeness.

    With ``symmetry`` the search branches on edge-orbit representatives at the
    root and expands every hit to its full orbit before returning.
    """
    view = full_view(g)
    base = view.base
    table = automorphism_table(base) if symmetry else None
    search = _HittingSearch(view, budget)
    universe = [base.edge_id[e] for e in view.edges()]
    try:
        if table is not None and k >= 1:
            roots = edge_orbit_representatives(base, table)
            found = search.run(k, True, root_branches=roots, universe=universe)
            expanded: set[FaultSet] = set()
            for f in edge_sets_to_faults(base, found):
                expanded |= orbit_of(f, table)
            sets = sorted(expanded, key=FaultSet.sort_key)
        else:
            sets = edge_sets_to_faults(base, search.run(k, True, universe=universe))
    except BudgetExceeded:
        return [], False, False
    sets = sorted(sets, key=FaultSet.sort_key)
    return sets, all(f.is_trivial(base) is not None for f in sets), True


def _same_side_pair(base: Graph, f: FaultSet) -> bool:
    if f.edges or len(f.vertices) != 2:
        return False
    u, v = sorted(f.vertices)
    return base.side[u] == base.side[v]


def smp(
    g: Graph,
    budget: int = DEFAULT_BUDGET,
    enumerate_all: bool = False,
    symmetry: bool = False,
    max_k: int | None = None,
) -> PreclusionReport:
    """Exact strong matching preclusion number over mixed vertex/edge faults."""
    start = time.perf_counter()
    base = g.base if isinstance(g, GraphView) else g
    table = automorphism_table(base) if symmetry and not enumerate_all else None
    calls = 0
    lower = 0
    report = None
    limit = base.order + base.size if max_k is None else max_k
    all_edges = list(range(base.size))
    try:
        for k in range(0, limit + 1):
            found: list[FaultSet] = []
            for r in range(0, min(k, base.order) + 1):
                if table is not None and r >= 1:
                    vsets = vertex_set_representatives(base, r, table)
                else:
                    vsets = list(combinations(range(base.order), r))
                for d in vsets:
                    view = apply_faults(base, FaultSet.of_vertices(d))
                    e = k - r
                    roots = None
                    if table is not None and r == 0 and e >= 1:
                        roots = edge_orbit_representatives(base, table)
                    # an unbalanced view is recognized without any matching call
                    search = _HittingSearch(view, budget, calls)
                    try:
                        hits = search.run(e, enumerate_all, root_branches=roots, universe=all_edges)
                    finally:
                        calls = search.calls
                    found.extend(edge_sets_to_faults(base, hits, d))
                    if found and not enumerate_all:
                        break
                if found and not enumerate_all:
                    break
            if found:
                found = sorted(set(found), key=FaultSet.sort_key)
                cls = all(_same_side_pair(base, f) for f in found) if enumerate_all else None
                report = PreclusionReport(SMP, k, found, True, cls, k, k, calls,
                                          enumerate_all=enumerate_all, symmetry=symmetry)
                break
            lower = k + 1
    except BudgetExceeded:
        report = PreclusionReport(SMP, None, [], False, None, lower, None, budget,
                                  enumerate_all=enumerate_all, symmetry=symmetry)
    if report is None:
        report = PreclusionReport(SMP, None, [], False, None, lower, None, calls,
                                  enumerate_all=enumerate_all, symmetry=symmetry)
    report.seconds = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# literal exhaustive scans


@dataclass
class ScanResult:
    """Outcome of checking every ``k``-subset of a candidate pool."""

    k: int
    pool_size: int
    total: int
    precluding: list[tuple[int, ...]]
    matching_calls: int
    chunks: int = 0
    seconds: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pool_size": self.pool_size,
            "total": self.total,
            "precluding": [list(s) for s in self.precluding],
            "matching_calls": self.matching_calls,
            "chunks": self.chunks,
        }


def _comb_masks(lo: int, hi: int, k: int, cache: dict) -> np.ndarray:
    """uint64 masks of every ``k``-subset of ``[lo, hi)``, lexicographic order."""
    key = (lo, k)
    if key in cache:
        return cache[key]
    if k == 0:
        out = np.zeros(1, dtype=np.uint64)
    else:
        parts = []
        for b in range(lo, hi - k + 1):
            rest = _comb_masks(b + 1, hi, k - 1, cache)
            parts.append(rest | np.uint64(1 << b))
        out = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)
    cache[key] = out
    return out


def _mask_bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _scan_chunk(args) -> tuple[list[tuple[int, ...]], int, int]:
    """All ``k``-subsets whose smallest edge id is ``first``."""
    order, edges, side, k, first, seeds = args
    g = Graph(order, edges, side)
    m = len(edges)
    target = target_coverage(order)
    alive = [True] * order
    calls = 0
    precluding: list[tuple[int, ...]] = []
    edge_id = g.edge_id

    def matched_mask(mate) -> int:
        mask = 0
        for v, w in enumerate(mate):
            if w > v:
                mask |= 1 << edge_id[(v, w)]
        return mask

    if m <= 64:
        if k == 1:
            pending = np.array([1 << first], dtype=np.uint64)
        else:
            rest = _comb_masks(first + 1, m, k - 1, {})
            pending = rest | np.uint64(1 << first)
        total = len(pending)
        for p in seeds:
            pending = pending[(pending & np.uint64(p)) != 0]
        while len(pending):
            c = int(pending[0])
            dead = set(_mask_bits(c))
            mate = [-1] * order
            calls += 1
            covered = 2 * hopcroft_karp(g.adj, side, alive, dead, mate)
            if covered >= target:
                p = np.uint64(matched_mask(mate))
                tail = pending[1:]
                pending = tail[(tail & p) != 0]
            else:
                precluding.append(tuple(sorted(dead)))
                pending = pending[1:]
        return precluding, calls, total
    learned = list(seeds)
    total = 0
    for rest in combinations(range(first + 1, m), k - 1):
        total += 1
        c = 1 << first
        for e in rest:
            c |= 1 << e
        if any(c & p == 0 for p in learned):
            continue
        dead = {first, *rest}
        mate = [-1] * order
        calls += 1
        covered = 2 * hopcroft_karp(g.adj, side, alive, dead, mate)
        if covered >= target:
            learned.append(matched_mask(mate))
        else:
            precluding.append(tuple(sorted(dead)))
    return precluding, calls, total


def _seed_masks(g: Graph) -> list[int]:
    """Fixed surviving matchings used to pre-filter every chunk."""
    target = target_coverage(g.order)
    seeds = []
    ms = [max_matching(g)]
    if isinstance(g, CayleyGraph) and g.n >= 3:
        try:
            ms.extend(canonical_matchings(g))
        except Exception:
            pass
    for mt in ms:
        if mt.coverage >= target:
            mask = 0
            for e in mt.edges:
                mask |= 1 << g.edge_id[e]
            if mask not in seeds:
                seeds.append(mask)
    return seeds


def scan_edge_subsets(g: Graph, k: int, threads: int = 1) -> ScanResult:
    """Check every ``k``-edge subset of ``g`` for preclusion.

    The pool is split into disjoint lexicographic ranges by smallest edge;
    each range is processed independently with the same seed matchings, so
    results and counters do not depend on ``threads``.
    """
    start = time.perf_counter()
    m = g.size
    if k < 1 or k > m:
        raise ValueError(f"k={k} outside [1, {m}]")
    if max_matching(g).coverage < target_coverage(g.order):
        sets = list(combinations(range(m), k))
        return ScanResult(k, m, len(sets), sets, 1, 0, time.perf_counter() - start)
    seeds = _seed_masks(g)
    jobs = [(g.order, list(g.edges), list(g.side), k, first, seeds) for first in range(m - k + 1)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_scan_chunk, jobs))
    else:
        results = [_scan_chunk(job) for job in jobs]
    precluding = [s for r in results for s in r[0]]
    calls = sum(r[1] for r in results)
    total = sum(r[2] for r in results)
    return ScanResult(k, m, total, precluding, calls, len(jobs), time.perf_counter() - start)


def scan_mixed_subsets(g: Graph, max_size: int) -> dict[int, list[FaultSet]]:
    """Every mixed vertex/edge fault set of size ``1..max_size``; precluding ones by size.

    Elements are ordered vertices first, then edges; no pruning of any kind.
    """
    elements: list[tuple[str, object]] = [("v", v) for v in range(g.order)]
    elements += [("e", e) for e in g.edges]
    out: dict[int, list[FaultSet]] = {}
    for size in range(1, max_size + 1):
        hits = []
        for combo in combinations(elements, size):
            f = FaultSet(
                frozenset(x for t, x in combo if t == "v"),
                frozenset(x for t, x in combo if t == "e"),
            )
            if is_preclusion_set(g, f):
                hits.append(f)
        out[size] = sorted(hits, key=FaultSet.sort_key)
    return out


def mixed_subset_count(g: Graph, max_size: int) -> int:
    n_el = g.order + g.size
    return sum(comb(n_el, s) for s in range(1, max_size + 1))


def mp_exhaustive(g: Graph, max_k: int | None = None, threads: int = 1) -> PreclusionReport:
    """mp by literal scans of every subset size in turn (no branching)."""
    start = time.perf_counter()
    if max_matching(g).coverage < target_coverage(g.order):
        return PreclusionReport(MP, 0, [FaultSet()], True, False, 0, 0, 1, enumerate_all=True)
    calls = 1
    limit = g.size if max_k is None else max_k
    for k in range(1, limit + 1):
        res = scan_edge_subsets(g, k, threads)
        calls += res.matching_calls
        if res.precluding:
            sets = edge_sets_to_faults(g, res.precluding)
            triv = all(f.is_trivial(g) is not None for f in sets)
            rep = PreclusionReport(MP, k, sets, True, triv, k, k, calls, enumerate_all=True)
            rep.seconds = time.perf_counter() - start
            return rep
    return PreclusionReport(MP, None, [], False, None, limit + 1, None, calls, enumerate_all=True)
