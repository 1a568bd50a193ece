"""Machine-checkable certificates for structural and preclusion claims on ``BS_n``.

A certificate names a claim, records its parameters, a verdict, and a witness
payload that :func:`validate` re-checks against a graph without running any
search.  Vertices are written as permutation strings, edges as ``[u, v]``
rank pairs.  Exhaustive "no set of size k precludes" claims have no short
witness; they carry the enumeration parameters and counters instead, and
validation checks those for consistency only.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from math import comb, factorial
from typing import Any, Callable

from . import __version__
from .cayley import (
    BS3_ALIASES,
    CayleyGraph,
    bs3_alias_edges,
    bubble_sort_star,
    canonical_matchings,
    cross_edges,
    subgraph,
)
from .export import graph_digest
from .graph import FaultSet, apply_faults, canon
from .hampath import (
    DEFAULT_NODE_BUDGET,
    ham_path,
    pm_from_path,
    random_structured_fault,
    stitched_path,
    verify_path,
)
from .matching import PERFECT, verify_matching
from .permcore import Transposition
from .preclusion import (
    DEFAULT_BUDGET,
    classify_optimal_mp_sets,
    imbalance_precludes,
    mp,
    scan_edge_subsets,
    smp,
)

SCHEMA_VERSION = 1
VERIFIED = "verified"
REFUTED = "refuted"
INCOMPLETE = "incomplete"

#: Largest n whose mp claims are settled by literal subset scans.
SCAN_MAX_N = 4


class CertificateError(ValueError):
    """Malformed certificate or one checked against the wrong graph."""


@dataclass
class Certificate:
    claim_id: str
    parameters: dict[str, Any]
    verdict: str
    witness: dict[str, Any]
    graph_digest: str
    tool_version: str = __version__
    schema: int = SCHEMA_VERSION

    @property
    def claim(self) -> str:
        return self.claim_id.split("/", 1)[0]

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": self.schema,
            "claim_id": self.claim_id,
            "parameters": self.parameters,
            "verdict": self.verdict,
            "witness": self.witness,
            "tool_version": self.tool_version,
            "graph_digest": self.graph_digest,
        }

    def dumps(self) -> str:
        return _dump(self.to_dict(), 0) + "\n"

    @classmethod
    def loads(cls, text: str) -> Certificate:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"not a certificate: {exc}") from exc
        if not isinstance(d, dict):
            raise CertificateError("certificate must be an object")
        if d.get("schema") != SCHEMA_VERSION:
            raise CertificateError(f"unsupported schema {d.get('schema')!r}")
        try:
            return cls(
                claim_id=d["claim_id"],
                parameters=d["parameters"],
                verdict=d["verdict"],
                witness=d["witness"],
                graph_digest=d["graph_digest"],
                tool_version=d["tool_version"],
                schema=d["schema"],
            )
        except KeyError as exc:
            raise CertificateError(f"missing field {exc}") from exc


def _scalar(x: Any) -> bool:
    return not isinstance(x, (dict, list))


def _dump(obj: Any, level: int) -> str:
    """JSON with one entry per line, scalar lists kept on a single line."""
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_dump(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(_scalar(x) for x in obj):
            return json.dumps(obj)
        items = [inner + _dump(x, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def _verdict(ok: bool) -> str:
    return VERIFIED if ok else REFUTED


def _edges(es) -> list[list[int]]:
    return [list(e) for e in sorted(es)]


def _label(g: CayleyGraph, v: int) -> str:
    return g.label(v)


# --------------------------------------------------------------------------
# producers


def cert_regularity(n: int) -> Certificate:
    """Order ``n!``, degree ``2n-3`` (1 for n = 2), bipartite, connected."""
    g = bubble_sort_star(n)
    degrees = sorted({g.degree(v) for v in range(g.order)})
    bip = all(g.side[u] != g.side[v] for u, v in g.edges)
    expected_degree = 1 if n == 2 else 2 * n - 3
    ok = g.order == factorial(n) and degrees == [expected_degree] and bip and g.is_connected()
    return Certificate(
        f"regularity/n={n}",
        {"n": n},
        _verdict(ok),
        {
            "order": g.order,
            "edges": g.size,
            "degrees": degrees,
            "bipartite": bip,
            "connected": g.is_connected(),
        },
        graph_digest(g),
    )


def cert_cross_edges(n: int) -> Certificate:
    """``|E_{i,j}| = 2(n-2)!``, edges pairwise independent, for all ``i < j``."""
    g = bubble_sort_star(n)
    expected = 2 * factorial(n - 2)
    pairs = []
    ok = True
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            es = cross_edges(g, i, j)
            ends = [x for e in es for x in e]
            independent = len(set(ends)) == len(ends)
            ok &= len(es) == expected and independent
            pairs.append({"i": i, "j": j, "count": len(es), "edges": _edges(es)})
    return Certificate(
        f"cross-edges/n={n}", {"n": n, "expected": expected}, _verdict(ok), {"pairs": pairs}, graph_digest(g)
    )


def outer_neighbors(g: CayleyGraph, u: int) -> tuple[int, int]:
    return g.step(u, Transposition(1, g.n)), g.step(u, Transposition(g.n - 1, g.n))


def outer_neighbors_disjoint(g: CayleyGraph, u: int, v: int) -> bool:
    """For distinct ``u, v`` in one copy, their outer neighbor pairs do not meet."""
    if u == v:
        raise ValueError("outer-neighbor disjointness is stated for distinct vertices")
    if g.last(u) != g.last(v):
        raise ValueError("vertices lie in different copies")
    return not set(outer_neighbors(g, u)) & set(outer_neighbors(g, v))


def cert_outer_disjoint(n: int) -> Certificate:
    g = bubble_sort_star(n)
    copies = []
    pairs = 0
    ok = True
    for i in range(1, n + 1):
        members = subgraph(g, [i]).members
        rows = [[_label(g, u)] + [_label(g, w) for w in outer_neighbors(g, u)] for u in members]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                pairs += 1
                ok &= outer_neighbors_disjoint(g, members[a], members[b])
        copies.append({"copy": i, "outer": rows})
    return Certificate(
        f"outer-disjoint/n={n}", {"n": n}, _verdict(ok), {"pairs_checked": pairs, "copies": copies}, graph_digest(g)
    )


def cert_canonical_pms(n: int) -> Certificate:
    g = bubble_sort_star(n)
    plus, minus = canonical_matchings(g)
    ok = bool(verify_matching(g, plus, PERFECT)) and bool(verify_matching(g, minus, PERFECT))
    ok &= not (plus.edges & minus.edges)
    share = factorial(n - 2)
    counts = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            es = set(cross_edges(g, i, j))
            cp, cm = len(es & plus.edges), len(es & minus.edges)
            ok &= cp == share and cm == share
            counts.append([i, j, cp, cm])
    return Certificate(
        f"canonical-pms/n={n}",
        {"n": n, "per_pair": share},
        _verdict(ok),
        {"plus": _edges(plus.edges), "minus": _edges(minus.edges), "pair_counts": counts},
        graph_digest(g),
    )


# Rows of the BS_3 case table: forced fault edges, completion pool, surviving PMs.
BS3_TABLE = [
    (("a", "b"), ("g", "p"), (("f", "h", "c"),)),
    (("a", "c"), ("g", "h", "p"), (("b", "d", "f"),)),
    (("a", "d"), ("g", "h", "p"), (("f", "h", "c"), ("b", "g", "e"))),
    (("a", "e"), ("g", "h", "p"), (("b", "d", "f"),)),
    (("a", "f"), ("h", "p"), (("b", "g", "e"),)),
]


def cert_bs3_table() -> Certificate:
    """Each row's listed matching(s) survive every admissible completion of ``F``."""
    g = bubble_sort_star(3)
    alias = bs3_alias_edges(g)
    rows = []
    ok = True
    for forced, pool, pms in BS3_TABLE:
        completions = []
        for extra in pool:
            f = FaultSet.of_edges(alias[x] for x in forced + (extra,))
            view = apply_faults(g, f)
            survivors = [
                "".join(pm) for pm in pms if verify_matching(view, [alias[x] for x in pm], PERFECT)
            ]
            ok &= bool(survivors)
            completions.append({"extra": extra, "surviving": survivors})
        rows.append({"forced": list(forced), "pool": list(pool), "completions": completions})
    return Certificate(
        "bs3-table",
        {"n": 3, "aliases": {k: list(v) for k, v in BS3_ALIASES.items()}},
        _verdict(ok),
        {"rows": rows},
        graph_digest(g),
    )


def _trivial_set(g: CayleyGraph, v: int) -> FaultSet:
    return FaultSet.of_edges(canon(v, w) for w in g.neighbors(v))


def cert_mp(n: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Certificate:
    """mp(BS_n) = 2n - 3, with a trivial witness and a size-(2n-4) refutation."""
    g = bubble_sort_star(n)
    claimed = 2 * n - 3
    upper = _trivial_set(g, 0)
    witness: dict[str, Any] = {
        "value": None,
        "upper": {"isolated_vertex": _label(g, 0), "edges": _edges(upper.edges)},
    }
    if n <= SCAN_MAX_N:
        res = scan_edge_subsets(g, claimed - 1, threads)
        witness["lower"] = {
            "method": "exhaustive-scan",
            "k": res.k,
            "pool": res.pool_size,
            "total": res.total,
            "precluding": len(res.precluding),
            "matching_calls": res.matching_calls,
        }
        value = claimed if not res.precluding else None
        complete = True
    else:
        rep = mp(g, budget=budget, symmetry=True)
        value, complete = rep.value, rep.complete
        witness["lower"] = {
            "method": "hitting-set",
            "k": rep.lower_bound - 1,
            "matching_calls": rep.matching_calls,
        }
    witness["value"] = value
    verdict = INCOMPLETE if not complete else _verdict(value == claimed)
    return Certificate(f"mp/n={n}", {"n": n, "claimed": claimed}, verdict, witness, graph_digest(g))


def cert_smp(n: int, budget: int = DEFAULT_BUDGET) -> Certificate:
    """smp(BS_n) = 2 and every optimal set is a same-side vertex pair."""
    g = bubble_sort_star(n)
    rep = smp(g, budget=budget, enumerate_all=True)
    if not rep.complete:
        return Certificate(f"smp/n={n}", {"n": n, "claimed": 2}, INCOMPLETE,
                           {"lower_bound": rep.lower_bound}, graph_digest(g))
    pairs = [[_label(g, v) for v in sorted(f.vertices)] for f in rep.optimal_sets]
    ok = rep.value == 2 and bool(rep.classification) and len(pairs) == 2 * comb(g.order // 2, 2)
    return Certificate(
        f"smp/n={n}",
        {"n": n, "claimed": 2},
        _verdict(ok),
        {
            "value": rep.value,
            "optimal_count": len(pairs),
            "optimal_vertex_pairs": pairs,
            "matching_calls": rep.matching_calls,
        },
        graph_digest(g),
    )


def cert_triviality(n: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Certificate:
    """Every optimal mp set of BS_n isolates a vertex."""
    g = bubble_sort_star(n)
    k = 2 * n - 3
    if n <= SCAN_MAX_N:
        res = scan_edge_subsets(g, k, threads)
        sets = [FaultSet.of_edges(g.edges[e] for e in s) for s in res.precluding]
        search = {"method": "exhaustive-scan", "k": k, "pool": res.pool_size, "total": res.total,
                  "matching_calls": res.matching_calls}
        complete = True
    else:
        sets, _, complete = classify_optimal_mp_sets(g, k, budget=budget, symmetry=True)
        search = {"method": "hitting-set", "k": k}
    if not complete:
        return Certificate(f"mp-trivial/n={n}", {"n": n}, INCOMPLETE, {"search": search}, graph_digest(g))
    rows = []
    ok = len(sets) == g.order
    for f in sorted(sets, key=FaultSet.sort_key):
        v = f.is_trivial(g)
        ok &= v is not None and len(f.edges) == g.degree(v)
        rows.append({"isolated_vertex": None if v is None else _label(g, v), "edges": _edges(f.edges)})
    return Certificate(
        f"mp-trivial/n={n}",
        {"n": n, "k": k},
        _verdict(ok),
        {"search": search, "optimal_count": len(rows), "optimal_sets": rows},
        graph_digest(g),
    )


def cert_stitching(n: int = 5, trials: int = 100, seed: int = 0, controls: int = 5) -> Certificate:
    """Random non-trivial structured faults all leave a perfect matching."""
    g = bubble_sort_star(n)
    rng = random.Random(seed)
    rows = []
    ok = True
    for _ in range(trials):
        sf = random_structured_fault(g, rng)
        hp = stitched_path(g, sf)
        m = pm_from_path(hp)
        good = bool(verify_matching(hp.host, m, PERFECT)) and not (m.edges & sf.faults().edges)
        ok &= good
        rows.append({
            "u": _label(g, sf.u),
            "faults": _edges(sf.faults().edges),
            "matching": _edges(m.edges),
        })
    trivial_rows = []
    for _ in range(controls):
        sf = random_structured_fault(g, rng, trivial=True)
        view = apply_faults(g, sf.faults())
        isolated = not view.neighbors(sf.u)
        ok &= isolated
        trivial_rows.append({"u": _label(g, sf.u), "faults": _edges(sf.faults().edges), "isolated": isolated})
    return Certificate(
        f"stitching/n={n}",
        {"n": n, "trials": trials, "seed": seed, "controls": controls},
        _verdict(ok),
        {"trials": rows, "controls": trivial_rows},
        graph_digest(g),
    )


def cert_hampath(n: int, a: str, b: str, budget: int = DEFAULT_NODE_BUDGET) -> Certificate:
    g = bubble_sort_star(n)
    res = ham_path(g, g.index(a), g.index(b), budget)
    params = {"n": n, "a": a, "b": b, "budget": budget}
    if res.path is None:
        verdict = INCOMPLETE if res.status == "budget-exhausted" else REFUTED
        return Certificate(f"hampath/n={n}", params, verdict, {"status": res.status, "nodes": res.nodes},
                           graph_digest(g))
    return Certificate(
        f"hampath/n={n}", params, VERIFIED, {"status": res.status, "path": res.path.labels()}, graph_digest(g)
    )


PRODUCERS: dict[str, Callable[..., Certificate]] = {
    "regularity": cert_regularity,
    "cross-edges": cert_cross_edges,
    "outer-disjoint": cert_outer_disjoint,
    "canonical-pms": cert_canonical_pms,
    "bs3-table": lambda n=3: cert_bs3_table(),
    "mp": cert_mp,
    "smp": cert_smp,
    "mp-trivial": cert_triviality,
    "stitching": lambda n=5, **kw: cert_stitching(n, **kw),
}


# --------------------------------------------------------------------------
# validation


def _fault(g: CayleyGraph, edges) -> FaultSet:
    return FaultSet.of_edges(tuple(e) for e in edges)


def _v_regularity(c: Certificate, g: CayleyGraph) -> bool:
    w = c.witness
    degrees = sorted({g.degree(v) for v in range(g.order)})
    expected = 1 if g.n == 2 else 2 * g.n - 3
    return (
        w["order"] == g.order == factorial(g.n)
        and w["edges"] == g.size
        and w["degrees"] == degrees == [expected]
        and w["bipartite"] is True
        and all(g.side[u] != g.side[v] for u, v in g.edges)
        and w["connected"] is True
    )


def _v_cross_edges(c: Certificate, g: CayleyGraph) -> bool:
    expected = 2 * factorial(g.n - 2)
    seen_pairs = set()
    total = 0
    for p in c.witness["pairs"]:
        i, j = p["i"], p["j"]
        es = [tuple(e) for e in p["edges"]]
        ends = [x for e in es for x in e]
        if len(es) != expected or p["count"] != expected or len(set(ends)) != len(ends):
            return False
        for u, v in es:
            if not g.has_edge(u, v) or {g.last(u), g.last(v)} != {i, j}:
                return False
        seen_pairs.add((i, j))
        total += len(es)
    # listed cross edges must be all edges joining different copies
    inter = sum(1 for u, v in g.edges if g.last(u) != g.last(v))
    return len(seen_pairs) == comb(g.n, 2) and total == inter


def _v_outer_disjoint(c: Certificate, g: CayleyGraph) -> bool:
    plus_t, minus_t = Transposition(1, g.n), Transposition(g.n - 1, g.n)
    count = 0
    for copy in c.witness["copies"]:
        rows = copy["outer"]
        members = subgraph(g, [copy["copy"]]).members
        if sorted(g.index(r[0]) for r in rows) != list(members):
            return False
        outer = []
        for r in rows:
            u = g.index(r[0])
            if [g.index(r[1]), g.index(r[2])] != [g.step(u, plus_t), g.step(u, minus_t)]:
                return False
            outer.extend(r[1:])
        # pairwise disjoint for all pairs iff no outer neighbor repeats
        if len(set(outer)) != len(outer):
            return False
        count += comb(len(rows), 2)
    return count == c.witness["pairs_checked"]


def _v_canonical_pms(c: Certificate, g: CayleyGraph) -> bool:
    w = c.witness
    plus = [tuple(e) for e in w["plus"]]
    minus = [tuple(e) for e in w["minus"]]
    if not (verify_matching(g, plus, PERFECT) and verify_matching(g, minus, PERFECT)):
        return False
    if set(plus) & set(minus):
        return False
    if any(g.generator_of(e) != Transposition(1, g.n) for e in plus):
        return False
    if any(g.generator_of(e) != Transposition(g.n - 1, g.n) for e in minus):
        return False
    share = factorial(g.n - 2)
    for i, j, cp, cm in w["pair_counts"]:
        inter = lambda es: sum(1 for u, v in es if {g.last(u), g.last(v)} == {i, j})  # noqa: E731
        if not (cp == cm == share == inter(plus) == inter(minus)):
            return False
    return True


def _v_bs3_table(c: Certificate, g: CayleyGraph) -> bool:
    alias = bs3_alias_edges(g)
    for row in c.witness["rows"]:
        for comp in row["completions"]:
            f = FaultSet.of_edges(alias[x] for x in row["forced"] + [comp["extra"]])
            view = apply_faults(g, f)
            if not comp["surviving"]:
                return False
            for pm in comp["surviving"]:
                if not verify_matching(view, [alias[x] for x in pm], PERFECT):
                    return False
    return len(c.witness["rows"]) == len(BS3_TABLE)


def _isolates(g: CayleyGraph, label: str, edges) -> bool:
    v = g.index(label)
    return {canon(v, w) for w in g.neighbors(v)} <= {tuple(e) for e in edges}


def _v_mp(c: Certificate, g: CayleyGraph) -> bool:
    w = c.witness
    up = w["upper"]
    claimed = c.parameters["claimed"]
    if len(up["edges"]) != claimed or not _isolates(g, up["isolated_vertex"], up["edges"]):
        return False
    lo = w["lower"]
    if lo["method"] == "exhaustive-scan":
        ok = lo["k"] == claimed - 1 and lo["total"] == comb(g.size, lo["k"]) and lo["precluding"] == 0
    else:
        ok = lo["k"] == claimed - 1
    return ok and w["value"] == claimed


def _v_smp(c: Certificate, g: CayleyGraph) -> bool:
    w = c.witness
    pairs = w["optimal_vertex_pairs"]
    if w["value"] != 2 or w["optimal_count"] != len(pairs):
        return False
    seen = set()
    for a, b in pairs:
        u, v = g.index(a), g.index(b)
        if u == v or g.side[u] != g.side[v]:
            return False
        if not imbalance_precludes(apply_faults(g, FaultSet.of_vertices([u, v]))):
            return False
        seen.add(frozenset((u, v)))
    return len(seen) == 2 * comb(g.order // 2, 2)


def _v_triviality(c: Certificate, g: CayleyGraph) -> bool:
    rows = c.witness["optimal_sets"]
    k = c.parameters["k"]
    vertices = set()
    for r in rows:
        if r["isolated_vertex"] is None or len(r["edges"]) != k:
            return False
        if not _isolates(g, r["isolated_vertex"], r["edges"]):
            return False
        vertices.add(r["isolated_vertex"])
    search = c.witness["search"]
    if search["method"] == "exhaustive-scan" and search["total"] != comb(g.size, k):
        return False
    return len(vertices) == len(rows) == g.order == c.witness["optimal_count"]


def _v_stitching(c: Certificate, g: CayleyGraph) -> bool:
    for t in c.witness["trials"]:
        f = _fault(g, t["faults"])
        m = [tuple(e) for e in t["matching"]]
        if len(f.edges) != 2 * g.n - 3 or set(m) & f.edges:
            return False
        if not verify_matching(apply_faults(g, f), m, PERFECT):
            return False
    for t in c.witness["controls"]:
        f = _fault(g, t["faults"])
        if not (t["isolated"] and _isolates(g, t["u"], t["faults"])):
            return False
    return len(c.witness["trials"]) == c.parameters["trials"]


def _v_hampath(c: Certificate, g: CayleyGraph) -> bool:
    labels = c.witness["path"]
    vs = [g.index(x) for x in labels]
    return labels[0] == c.parameters["a"] and labels[-1] == c.parameters["b"] and verify_path(g, vs)


VALIDATORS: dict[str, Callable[[Certificate, CayleyGraph], bool]] = {
    "regularity": _v_regularity,
    "cross-edges": _v_cross_edges,
    "outer-disjoint": _v_outer_disjoint,
    "canonical-pms": _v_canonical_pms,
    "bs3-table": _v_bs3_table,
    "mp": _v_mp,
    "smp": _v_smp,
    "mp-trivial": _v_triviality,
    "stitching": _v_stitching,
    "hampath": _v_hampath,
}


def validate(cert: Certificate, g: CayleyGraph) -> str:
    """Re-check a certificate's witness against ``g``; no search is run."""
    if cert.graph_digest != graph_digest(g):
        raise CertificateError("graph digest mismatch")
    checker = VALIDATORS.get(cert.claim)
    if checker is None:
        raise CertificateError(f"unknown claim {cert.claim_id!r}")
    if cert.verdict == INCOMPLETE:
        return INCOMPLETE
    try:
        ok = checker(cert, g)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CertificateError(f"malformed witness: {exc}") from exc
    return VERIFIED if ok else REFUTED


def graph_for(cert: Certificate) -> CayleyGraph:
    return bubble_sort_star(int(cert.parameters["n"]))
