"""``bubblestar`` command line.

Exit codes: 0 success / verified / precludes, 1 refuted / does not preclude,
2 incomplete (budget), 64 usage error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cayley import (
    BUBBLE_SORT_STAR,
    CayleyGraph,
    GeneratingGraph,
    ResourceLimitError,
    bs3_alias_edges,
    bs3_edge_alias,
    build,
    bs_generators,
)
from .certify import (
    INCOMPLETE,
    PRODUCERS,
    REFUTED,
    VERIFIED,
    Certificate,
    CertificateError,
    cert_hampath,
    cert_mp,
    cert_smp,
    cert_triviality,
    validate,
    graph_for,
)
from .export import from_dot, from_edgelist, to_dot, to_edgelist
from .graph import FaultSet, GraphError, canon
from .hampath import FOUND, BUDGET_EXHAUSTED, ham_path
from .permcore import PermutationError, Transposition
from .preclusion import (
    DEFAULT_BUDGET,
    THREADS_ENV,
    PreclusionReport,
    default_threads,
    is_preclusion_set,
    mp,
    mp_exhaustive,
    smp,
    surviving_matching,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCOMPLETE = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _graph_from_args(args) -> CayleyGraph:
    if getattr(args, "graph", None):
        text = Path(args.graph).read_text()
        return from_dot(text) if text.lstrip().startswith("graph") else from_edgelist(text)
    if args.n is None:
        raise UsageError("--n or --graph is required")
    if getattr(args, "generators", None):
        ts = []
        for tok in args.generators.replace(",", " ").split():
            i, j = tok.split("-")
            ts.append(Transposition(int(i), int(j)))
        return build(GeneratingGraph(args.n, tuple(ts)))
    return build(bs_generators(args.n))


_TOKEN = re.compile(
    r"\s*(?:"
    r"\(\s*(?P<pa>\d+)\s*[,\s]\s*(?P<pb>\d+)\s*\)"  # (123,132)
    r"|(?P<da>\d+)-(?P<db>\d+)"  # 123-132
    r"|(?P<vertex>\d+)"  # 123
    r"|(?P<alias>[a-z])"  # BS_3 alias
    r")\s*(?:,|$)"
)


def parse_fault_literal(text: str, g: CayleyGraph) -> FaultSet:
    """Parse ``{a,f,g}``, ``{(123,132), 213-312}`` or ``{123, 312}`` (vertices)."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise UsageError(f"fault set must be written in braces: {text!r}")
    body = body[1:-1].strip()
    vertices, edges = set(), set()
    pos = 0
    while pos < len(body):
        m = _TOKEN.match(body, pos)
        if not m or m.end() == pos:
            raise UsageError(f"malformed fault literal near {body[pos:]!r}")
        pos = m.end()
        try:
            if m.group("alias"):
                if g.n != 3 or g.family != BUBBLE_SORT_STAR:
                    raise UsageError("letter aliases are defined for BS_3 only")
                alias = bs3_alias_edges(g)
                if m.group("alias") not in alias:
                    raise UsageError(f"unknown edge alias {m.group('alias')!r}")
                edges.add(alias[m.group("alias")])
            elif m.group("vertex"):
                vertices.add(g.index(m.group("vertex")))
            else:
                a = m.group("pa") or m.group("da")
                b = m.group("pb") or m.group("db")
                e = canon(g.index(a), g.index(b))
                if not g.has_edge(*e):
                    raise UsageError(f"({a},{b}) is not an edge")
                edges.add(e)
        except (PermutationError, GraphError) as exc:
            raise UsageError(str(exc)) from exc
    return FaultSet(frozenset(vertices), frozenset(edges))


def _edge_text(g: CayleyGraph, e) -> str:
    if g.n == 3 and g.family == BUBBLE_SORT_STAR:
        return bs3_edge_alias(g, e)
    return "({},{})".format(*g.edge_labels(e))


def _fault_text(g: CayleyGraph, f: FaultSet) -> str:
    items = [g.label(v) for v in sorted(f.vertices)] + [_edge_text(g, e) for e in sorted(f.edges)]
    return "{" + ",".join(items) + "}"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_threads()


# --------------------------------------------------------------------------
# commands


def cmd_construct(args) -> int:
    g = _graph_from_args(args)
    fmt = args.format or "edgelist"
    if fmt == "edgelist":
        _emit(to_edgelist(g), args.out)
    elif fmt == "dot":
        _emit(to_dot(g), args.out)
    else:
        raise UsageError(f"construct does not support --format {fmt}")
    return EXIT_OK


def _print_report(g: CayleyGraph, rep: PreclusionReport) -> None:
    name = f"BS_{g.n}" if g.family == BUBBLE_SORT_STAR else f"Cay(S_{g.n}, T)"
    if rep.value is None:
        print(f"{rep.kind}({name}): incomplete, bounds [{rep.lower_bound}, {rep.upper_bound}]")
        return
    print(f"{rep.kind}({name}) = {rep.value}")
    label = "all trivial" if rep.kind == "mp" else "all same-side vertex pairs"
    if rep.enumerate_all:
        verdict = "yes" if rep.classification else "no"
        print(f"optimal sets: {len(rep.optimal_sets)}, {label}: {verdict}")
        for f in rep.optimal_sets:
            print("  " + _fault_text(g, f))
    elif rep.optimal_sets:
        print("witness: " + _fault_text(g, rep.optimal_sets[0]))
    print(f"matching computations: {rep.matching_calls}")


def _preclusion_cmd(args, kind: str) -> int:
    g = _graph_from_args(args)
    budget = args.budget
    if kind == "mp":
        if args.exhaustive:
            rep = mp_exhaustive(g, threads=_threads(args))
        else:
            rep = mp(g, budget=budget, enumerate_all=args.enumerate_all, symmetry=args.symmetry)
    else:
        rep = smp(g, budget=budget, enumerate_all=args.enumerate_all, symmetry=args.symmetry)
    cert = None
    if (args.out or args.format == "cert") and g.family == BUBBLE_SORT_STAR and g.n >= 3:
        if kind == "smp":
            cert = cert_smp(g.n, budget=budget)
        elif args.enumerate_all:
            cert = cert_triviality(g.n, budget=budget, threads=_threads(args))
        else:
            cert = cert_mp(g.n, budget=budget, threads=_threads(args))
    if args.format == "cert" and cert is not None:
        sys.stdout.write(cert.dumps())
    else:
        _print_report(g, rep)
    if args.out and cert is not None:
        Path(args.out).write_text(cert.dumps())
    return EXIT_OK if rep.complete else EXIT_INCOMPLETE


def cmd_mp(args) -> int:
    return _preclusion_cmd(args, "mp")


def cmd_smp(args) -> int:
    return _preclusion_cmd(args, "smp")


def _infer_n(literal: str) -> int | None:
    digits = re.findall(r"\d+", literal)
    if digits:
        return len(digits[0])
    return 3 if re.search(r"[a-z]", literal) else None


def cmd_check(args) -> int:
    if args.n is None and not args.graph:
        args.n = _infer_n(args.faults)
    g = _graph_from_args(args)
    f = parse_fault_literal(args.faults, g)
    if is_preclusion_set(g, f):
        print(f"{_fault_text(g, f)} precludes: no perfect or almost-perfect matching remains")
        return EXIT_OK
    m = surviving_matching(g, f)
    texts = [_edge_text(g, e) for e in m.sorted_edges()]
    items = ",".join(sorted(texts) if g.n == 3 and g.family == BUBBLE_SORT_STAR else texts)
    print(f"{_fault_text(g, f)} does not preclude; surviving matching {{{items}}}")
    return EXIT_REFUTED


def cmd_certify(args) -> int:
    producer = PRODUCERS.get(args.claim)
    if producer is None:
        raise UsageError(f"unknown claim {args.claim!r}; choose from {', '.join(sorted(PRODUCERS))}")
    kwargs = {}
    if args.claim in ("mp", "mp-trivial"):
        kwargs = {"budget": args.budget, "threads": _threads(args)}
    elif args.claim == "smp":
        kwargs = {"budget": args.budget}
    elif args.claim == "stitching":
        kwargs = {"trials": args.trials, "seed": args.seed}
    if args.claim == "bs3-table":
        cert = producer()
    else:
        if args.n is None:
            raise UsageError("--n is required")
        cert = producer(args.n, **kwargs)
    _emit(cert.dumps(), args.out)
    print(f"{cert.claim_id}: {cert.verdict}", file=sys.stderr)
    return {VERIFIED: EXIT_OK, REFUTED: EXIT_REFUTED, INCOMPLETE: EXIT_INCOMPLETE}[cert.verdict]


def cmd_hampath(args) -> int:
    g = _graph_from_args(args)
    a, b = g.index(args.a), g.index(args.b)
    if a == b:
        raise UsageError("endpoints must differ")
    if args.out and g.family == BUBBLE_SORT_STAR:
        cert = cert_hampath(g.n, args.a, args.b, args.budget)
        Path(args.out).write_text(cert.dumps())
    res = ham_path(g, a, b, args.budget)
    if res.status == FOUND:
        print(" ".join(res.path.labels()))
        return EXIT_OK
    print(f"no Hamiltonian path: {res.status} after {res.nodes} nodes")
    return EXIT_INCOMPLETE if res.status == BUDGET_EXHAUSTED else EXIT_REFUTED


def cmd_validate(args) -> int:
    try:
        cert = Certificate.loads(Path(args.certificate).read_text())
        g = _graph_from_args(args) if (args.graph or args.n) else graph_for(cert)
        verdict = validate(cert, g)
    except CertificateError as exc:
        print(f"invalid certificate: {exc}", file=sys.stderr)
        return EXIT_REFUTED if "digest" in str(exc) else EXIT_USAGE
    print(f"{cert.claim_id}: {verdict}")
    return {VERIFIED: EXIT_OK, REFUTED: EXIT_REFUTED, INCOMPLETE: EXIT_INCOMPLETE}[verdict]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bubblestar", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=f"bubblestar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, graph=True):
        p.add_argument("--n", type=int)
        if graph:
            p.add_argument("--graph", help="edge-list or DOT file instead of --n")
            p.add_argument("--generators", help="custom transpositions, e.g. '1-2 2-3 3-4'")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--threads", type=int, default=None, help=f"default: ${THREADS_ENV} or CPU count")
        p.add_argument("--format", choices=["edgelist", "dot", "cert"])
        p.add_argument("--out")

    p = sub.add_parser("construct", help="emit a graph as edge list or DOT")
    common(p)
    p.set_defaults(func=cmd_construct)

    for name, func in (("mp", cmd_mp), ("smp", cmd_smp)):
        p = sub.add_parser(name, help=f"compute {name} exactly")
        common(p)
        p.add_argument("--enumerate-all", action="store_true")
        p.add_argument("--symmetry", action="store_true")
        if name == "mp":
            p.add_argument("--exhaustive", action="store_true", help="literal subset scans")
        p.set_defaults(func=func)

    p = sub.add_parser("check", help="is a fault set a preclusion set?")
    p.add_argument("faults", help="e.g. '{a,f,g}' or '{(123,132),213-312}' or '{123,312}'")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("certify", help="produce a certificate")
    p.add_argument("claim", help=", ".join(sorted(PRODUCERS)))
    common(p, graph=False)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("hampath", help="Hamiltonian path between two vertices")
    p.add_argument("a")
    p.add_argument("b")
    common(p)
    p.set_defaults(func=cmd_hampath, budget=10**6)

    p = sub.add_parser("validate", help="re-check a certificate")
    p.add_argument("certificate")
    common(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bubblestar: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PermutationError, GraphError, ResourceLimitError, ValueError) as exc:
        print(f"bubblestar: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
