"""Graph documents: JSON objects with ``n``, ``domain``, ``m``/``d``,
optional ``default`` and a ``weights`` list of ``{i, j, value}`` records."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import GraphError, ParseError
from .graph import INT, REAL, VEC, Domain, WeightedGraph, new_graph

BUNDLED = ("fig1_left", "fig1_right", "fig2")


def _domain_from_doc(doc: dict) -> Domain:
    kind = doc.get("domain")
    if kind == INT:
        if "m" not in doc:
            raise ParseError("integer domain requires field 'm'")
        if "d" in doc:
            raise ParseError("field 'd' is only valid for the vector domain")
        m = doc["m"]
        if not isinstance(m, int) or isinstance(m, bool):
            raise ParseError(f"'m' must be an integer, got {m!r}")
        return Domain.integer(m)
    if kind == REAL:
        if "m" in doc or "d" in doc:
            raise ParseError("real domain takes neither 'm' nor 'd'")
        return Domain.real()
    if kind == VEC:
        if "d" not in doc:
            raise ParseError("vector domain requires field 'd'")
        if "m" in doc:
            raise ParseError("field 'm' is only valid for the integer domain")
        d = doc["d"]
        if not isinstance(d, int) or isinstance(d, bool):
            raise ParseError(f"'d' must be an integer, got {d!r}")
        return Domain.vector(d)
    raise ParseError(f"unknown domain {kind!r}; expected 'int', 'real' or 'vec'")


def graph_from_dict(doc: dict) -> WeightedGraph:
    if not isinstance(doc, dict):
        raise ParseError("graph document must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"'n' must be an integer, got {n!r}")
    records = doc.get("weights", [])
    if not isinstance(records, list):
        raise ParseError("'weights' must be a list")
    try:
        domain = _domain_from_doc(doc)
        entries = {}
        for rec in records:
            if not isinstance(rec, dict) or not {"i", "j", "value"} <= rec.keys():
                raise ParseError(f"weight record {rec!r} needs keys i, j, value")
            i, j = rec["i"], rec["j"]
            if not isinstance(i, int) or not isinstance(j, int) or i > j:
                raise ParseError(f"weight record {rec!r} needs integer indices with i <= j")
            value = rec["value"]
            if (i, j) in entries and entries[(i, j)] != value:
                raise ParseError(f"conflicting duplicate entries for pair ({i}, {j})")
            entries[(i, j)] = value
        return new_graph(n, entries, domain, default=doc.get("default"))
    except ParseError:
        raise
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def parse_graph(text: str) -> WeightedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return graph_from_dict(doc)


def graph_to_dict(G: WeightedGraph) -> dict:
    doc: dict = {"n": G.n, "domain": G.domain.kind}
    if G.domain.kind == INT:
        doc["m"] = G.domain.m
    elif G.domain.kind == VEC:
        doc["d"] = G.domain.d
    doc["weights"] = [
        {"i": i, "j": j, "value": _jsonable(G.weight(i, j))} for i, j in G.pairs()
    ]
    return doc


def _jsonable(value):
    return list(value) if isinstance(value, tuple) else value


def serialize_graph(G: WeightedGraph) -> str:
    """Deterministic document listing every pair explicitly, ordered by (i, j)."""
    return json.dumps(graph_to_dict(G), indent=1)


def load_graph(path) -> WeightedGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def dump_graph(G: WeightedGraph, path) -> None:
    Path(path).write_text(serialize_graph(G) + "\n")


def load_bundled(name: str) -> WeightedGraph:
    """Load one of the graphs shipped with the package (see ``BUNDLED``)."""
    if name not in BUNDLED:
        raise KeyError(f"no bundled graph {name!r}; choose from {BUNDLED}")
    text = (resources.files("subtriangle") / "data" / f"{name}.json").read_text()
    return parse_graph(text)
