"""Command-line front end.

Exit codes: 0 ok/equal/satisfied, 1 negative result, 2 unreadable input,
3 operation not applicable to the graph, 4 size budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .census import CensusConfig, run_census
from .errors import BudgetError, DomainError, GraphError, NotApplicableError, ParseError
from .experiment import KINDS, run_distribution_experiment
from .genericity import (
    check_generic_combined,
    check_generic_edge,
    check_generic_node,
    check_generic_vector_edge,
)
from .graph import DEFAULT_CANONICAL_CAP, INT, VEC, WeightedGraph, are_isomorphic, canonical_form
from .invariants import (
    adjacent_sum_component,
    adjacent_sum_distribution,
    characteristic_polynomial,
    component_distribution,
    default_tolerance,
    delta_distribution,
    distributions_equal,
    edge_weight_distribution,
    mixed_adjacent_sum,
    node_beta_distribution,
    node_component_distribution,
    triangle_code,
)
from .io import load_graph
from .pairperm import lemma31_census
from .reconstruct import check_corollary_distinct, check_triangle_theorem, reconstruct_mapping

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_NOT_APPLICABLE, EXIT_BUDGET = 0, 1, 2, 3, 4

KIND_HELP = (
    "triangle | dg | dalpha | charpoly | component:L | alpha:L | mixed:L | node:L | beta:L | delta:L"
)
THEOREMS = (
    "triangle", "corollary", "generic-edge", "generic-vector",
    "generic-node", "generic-node:sum", "generic-node:product", "generic-combined",
)


def _split_kind(kind: str) -> tuple[str, int | None]:
    name, _, arg = kind.partition(":")
    if not arg:
        return name, None
    try:
        return name, int(arg)
    except ValueError:
        raise DomainError(f"kind {kind!r}: component index must be an integer") from None


def fingerprint(G: WeightedGraph, kind: str):
    """Fingerprint value of ``kind``: an int, a Distribution or a CharPoly."""
    name, l = _split_kind(kind)
    simple = {"triangle": triangle_code, "dg": edge_weight_distribution,
              "dalpha": adjacent_sum_distribution, "charpoly": characteristic_polynomial}
    indexed = {"component": component_distribution, "alpha": adjacent_sum_component,
               "mixed": mixed_adjacent_sum, "node": node_component_distribution,
               "beta": node_beta_distribution, "delta": delta_distribution}
    if name in simple and l is None:
        return simple[name](G)
    if name in indexed and l is not None:
        return indexed[name](G, l)
    raise DomainError(f"unknown fingerprint kind {kind!r}; expected {KIND_HELP}")


def format_fingerprint(kind: str, value) -> str:
    if kind == "triangle":
        return hex(value)
    if kind == "charpoly":
        return json.dumps(list(value.coefficients))
    return json.dumps(value.tolist())


def default_kinds(G: WeightedGraph) -> list[str]:
    if G.domain.kind == INT:
        return ["triangle", "dg", "dalpha", "charpoly"]
    if G.domain.kind == VEC:
        d = G.domain.dim
        return ([f"component:{l}" for l in range(1, d + 1)] + [f"alpha:{l}" for l in range(1, d + 1)]
                + [f"mixed:{l}" for l in range(1, d)] + [f"node:{l}" for l in range(1, d + 1)]
                + [f"beta:{l}" for l in range(1, d)] + ["delta:1"])
    return ["dg", "dalpha", "node:1", "delta:1"]


def _fingerprints_equal(a, b, tol: float) -> bool:
    if hasattr(a, "equals"):
        return distributions_equal(a, b, tol)
    return a == b


def _isomorphism_note(G: WeightedGraph, H: WeightedGraph, tol: float) -> str:
    if G.domain.kind == INT and G.n <= DEFAULT_CANONICAL_CAP:
        same = canonical_form(G) == canonical_form(H)
        return "isomorphic (canonical forms agree)" if same else "not isomorphic (canonical forms differ)"
    if reconstruct_mapping(G, H, tol=tol) is not None:
        return "isomorphic (verified node mapping found)"
    if G.n <= 8:
        if are_isomorphic(G, H, tol=tol):
            return "isomorphic (verified node mapping found)"
        return "not isomorphic (exhaustive search)"
    return "equality is fingerprint-level only"


def cmd_fingerprint(args) -> int:
    G = load_graph(args.graph)
    print(format_fingerprint(args.kind, fingerprint(G, args.kind)))
    return EXIT_OK


def cmd_compare(args) -> int:
    G, H = load_graph(args.graph_a), load_graph(args.graph_b)
    if G.n != H.n or G.domain != H.domain:
        raise NotApplicableError(
            f"graphs differ in size or domain: n={G.n}/{H.n}, {G.domain}/{H.domain}"
        )
    tol = default_tolerance(G) if args.tolerance is None else args.tolerance
    kinds = [k for arg in args.kind for k in arg.split(",")] if args.kind else default_kinds(G)
    all_equal = True
    for kind in kinds:
        same = _fingerprints_equal(fingerprint(G, kind), fingerprint(H, kind), tol)
        all_equal &= same
        print(f"{kind}: {'equal' if same else 'unequal'}")
    if all_equal:
        print("all distributions equal")
        print(f"note: {_isomorphism_note(G, H, tol)}")
        return EXIT_OK
    print("distributions differ")
    return EXIT_NEGATIVE


def cmd_check(args) -> int:
    G = load_graph(args.graph)
    theorem = args.theorem
    kw = {"tol": args.tolerance}
    if theorem == "triangle":
        report = check_triangle_theorem(G, **kw)
    elif theorem == "corollary":
        report = check_corollary_distinct(G, **kw)
    elif theorem == "generic-edge":
        report = check_generic_edge(G, max_witnesses=args.max_witnesses, **kw)
    elif theorem == "generic-vector":
        report = check_generic_vector_edge(G, max_witnesses=args.max_witnesses, **kw)
    elif theorem.startswith("generic-node"):
        variant = theorem.partition(":")[2] or "sum"
        report = check_generic_node(G, variant=variant, max_witnesses=args.max_witnesses, **kw)
    else:
        report = check_generic_combined(
            G, edge_dim=args.edge_dim, node_dim=args.node_dim, max_witnesses=args.max_witnesses, **kw
        )
    print(report.to_text(args.max_witnesses))
    return EXIT_OK if report.satisfied else EXIT_NEGATIVE


def _emit(text: str, out: str | None):
    print(text, end="" if text.endswith("\n") else "\n")
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def cmd_census(args) -> int:
    config = CensusConfig(
        n=args.n,
        m=args.m,
        surjective=args.mode == "surjective",
        workers=args.workers,
        budget_override=args.budget_override,
    )
    report = run_census(config)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    report = run_distribution_experiment(args.n, args.trials, args.seed, kind=args.kind, d=args.dim)
    _emit(report.to_json() if args.format == "json" else report.to_text(), args.out)
    return EXIT_OK if report.all_passed else EXIT_NEGATIVE


def cmd_lemma31(args) -> int:
    result = lemma31_census(args.n, workers=args.workers, budget_override=args.budget_override)
    print(result.to_text())
    print(f"non-induced={result.total - result.induced}")
    return EXIT_OK if result.agree else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subtriangle", description="Fingerprints and reconstruction checks for weighted graphs."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fingerprint", help="print one fingerprint of a graph file")
    p.add_argument("graph")
    p.add_argument("--kind", default="triangle", help=KIND_HELP)
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("compare", help="compare fingerprints of two graph files")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--kind", action="append", help="repeatable or comma-separated; " + KIND_HELP)
    p.add_argument("--tolerance", type=float, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check", help="check a reconstruction hypothesis")
    p.add_argument("graph")
    p.add_argument("--theorem", choices=THEOREMS, default="triangle")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--max-witnesses", type=int, default=10)
    p.add_argument("--edge-dim", type=int, default=None, help="generic-combined only")
    p.add_argument("--node-dim", type=int, default=None, help="generic-combined only")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("census", help="exhaustive census of one (n, m) universe")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--mode", choices=("surjective", "all"), default="all")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-override", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("experiment", help="randomized real-weight reconstruction trials")
    p.add_argument("n", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=KINDS, default="edge")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("lemma31", help="exhaustive pair-permutation check")
    p.add_argument("n", type=int, nargs="?", default=5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-override", action="store_true")
    p.set_defaults(func=cmd_lemma31)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotApplicableError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
