"""Edge-list and DOT serialization of Cayley graphs.

Edge list::

    # bubblestar edgelist
    # n 3
    # family bubble-sort-star
    # generators 1-2 1-3 2-3
    0 1
    0 2
    ...

Each data line is a canonical ``u v`` pair of vertex ranks.  DOT output uses
permutation strings as node names.  Both formats parse back to a graph whose
re-export is byte-identical.
"""

from __future__ import annotations

import hashlib
import re

from .cayley import CayleyGraph, GeneratingGraph, build
from .graph import GraphError, canon
from .permcore import Permutation, Transposition, rank_entries

EDGELIST_MAGIC = "# bubblestar edgelist"


def _gen_spec(g: CayleyGraph) -> str:
    return g.generators.spec()


def _parse_gens(n: int, text: str) -> GeneratingGraph:
    ts = []
    for tok in text.replace(",", " ").split():
        i, j = tok.split("-")
        ts.append(Transposition(int(i), int(j)))
    return GeneratingGraph(n, tuple(ts))


def to_edgelist(g: CayleyGraph) -> str:
    lines = [
        EDGELIST_MAGIC,
        f"# n {g.n}",
        f"# family {g.family}",
        f"# generators {_gen_spec(g)}",
    ]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_digest(g: CayleyGraph) -> str:
    """sha256 of the canonical edge list."""
    return "sha256:" + hashlib.sha256(to_edgelist(g).encode()).hexdigest()


def from_edgelist(text: str) -> CayleyGraph:
    header: dict[str, str] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split(None, 1)
            if len(parts) == 2:
                header[parts[0]] = parts[1]
            continue
        try:
            u, v = (int(x) for x in line.split())
        except ValueError as exc:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}") from exc
        edges.append(canon(u, v))
    if "n" not in header or "generators" not in header:
        raise GraphError("edge list header lacks n / generators")
    g = build(_parse_gens(int(header["n"]), header["generators"]))
    if header.get("family", g.family) != g.family:
        raise GraphError(f"family tag {header['family']!r} does not match generators")
    if sorted(edges) != g.edges:
        raise GraphError("edge lines do not match the declared generating set")
    return g


def to_dot(g: CayleyGraph) -> str:
    lines = [
        f"graph BS{g.n} {{" if g.family == "bubble-sort-star" else f"graph C{g.n} {{",
        f"  // n={g.n} family={g.family} generators={_gen_spec(g).replace(' ', ',')}",
    ]
    lines.extend(f'  "{g.label(v)}";' for v in range(g.order))
    lines.extend(f'  "{g.label(u)}" -- "{g.label(v)}";' for u, v in g.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_META = re.compile(r"//\s*n=(\d+)\s+family=(\S+)\s+generators=(\S+)")
_DOT_EDGE = re.compile(r'"([^"]+)"\s*--\s*"([^"]+)"')


def from_dot(text: str) -> CayleyGraph:
    meta = _DOT_META.search(text)
    if not meta:
        raise GraphError("DOT text lacks the bubblestar metadata comment")
    n = int(meta.group(1))
    g = build(_parse_gens(n, meta.group(3)))
    edges = []
    for a, b in _DOT_EDGE.findall(text):
        pa, pb = Permutation.parse(a), Permutation.parse(b)
        edges.append(canon(rank_entries(pa.entries), rank_entries(pb.entries)))
    if sorted(edges) != g.edges:
        raise GraphError("DOT edges do not match the declared generating set")
    return g
