"""Matching preclusion of bubble-sort star graphs and other transposition Cayley graphs."""

__version__ = "0.1.0"

from .cayley import (  # noqa: E402
    CayleyGraph,
    GeneratingGraph,
    bs_generators,
    bubble_sort_star,
    build,
    canonical_matchings,
    cross_edges,
    subgraph,
)
from .graph import FaultSet, Graph, GraphView, apply_faults  # noqa: E402
from .matching import Matching, max_matching, verify_matching  # noqa: E402
from .permcore import Permutation, Transposition, compose, parity, rank, unrank  # noqa: E402
from .preclusion import is_preclusion_set, mp, smp  # noqa: E402

__all__ = [
    "CayleyGraph",
    "FaultSet",
    "GeneratingGraph",
    "Graph",
    "GraphView",
    "Matching",
    "Permutation",
    "Transposition",
    "apply_faults",
    "bs_generators",
    "bubble_sort_star",
    "build",
    "canonical_matchings",
    "compose",
    "cross_edges",
    "is_preclusion_set",
    "max_matching",
    "mp",
    "parity",
    "rank",
    "smp",
    "subgraph",
    "unrank",
    "verify_matching",
]
