"""Genericity hypotheses for reconstruction from one-dimensional distributions.

Each family compares a set of sums over adjacent index patterns ``(i, j, k)``
against sums over four distinct indices ``(m, p, q, r)``; the hypothesis holds
when the two value sets are disjoint. Collisions are found by sorting one
side and binary-searching the other instead of comparing every pair.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import DomainError, GraphError, NotApplicableError
from .graph import VEC, WeightedGraph
from .invariants import default_tolerance, ordered_triples
from .reconstruct import DEFAULT_MAX_WITNESSES, HypothesisReport


@lru_cache(maxsize=None)
def ordered_quadruples(n: int) -> tuple[np.ndarray, ...]:
    q = np.array(list(itertools.permutations(range(n), 4)), dtype=np.intp).reshape(-1, 4)
    return q[:, 0], q[:, 1], q[:, 2], q[:, 3]


def _collisions(left, left_idx, right, right_idx, tol, limit):
    """Return (collision count, up to ``limit`` witness pairs)."""
    order = np.argsort(right, kind="stable")
    srt = right[order]
    if tol == 0:
        lo = np.searchsorted(srt, left, side="left")
        hi = np.searchsorted(srt, left, side="right")
    else:
        slack = tol * np.maximum(1.0, np.abs(left))
        lo = np.searchsorted(srt, left - slack, side="left")
        hi = np.searchsorted(srt, left + slack, side="right")
    hits = hi - lo
    count = int(hits.sum())
    witnesses = []
    for s in np.flatnonzero(hits):
        for pos in range(lo[s], hi[s]):
            if len(witnesses) >= limit:
                return count, witnesses
            t = order[pos]
            witnesses.append(
                (tuple(int(x[s]) + 1 for x in left_idx), tuple(int(x[t]) + 1 for x in right_idx))
            )
    return count, witnesses


def _scalars(G: WeightedGraph, l: int) -> np.ndarray:
    if G.domain.kind == VEC:
        return G.matrix[:, :, l - 1].astype(np.float64)
    return G.matrix.astype(np.float64)


def _edge_family(A, B, n):
    i, j, k = ordered_triples(n)
    m, p, q, r = ordered_quadruples(n)
    return A[i, j] + B[j, k], (i, j, k), A[m, p] + B[q, r], (m, p, q, r)


def _node_sum_family(a, b, n):
    i, j, k = ordered_triples(n)
    m, p, q, r = ordered_quadruples(n)
    return a[i] + a[j] + b[j] + b[k], (i, j, k), a[m] + a[p] + b[q] + b[r], (m, p, q, r)


def _node_product_family(a, b, n):
    i, j, k = ordered_triples(n)
    m, p, q, r = ordered_quadruples(n)
    return a[i] * a[j] + b[j] * b[k], (i, j, k), a[m] * a[p] + b[q] * b[r], (m, p, q, r)


def _delta_family(w, A, n):
    i, j, k = ordered_triples(n)
    m, p, q, r = ordered_quadruples(n)
    return w[i] + w[j] + A[j, k], (i, j, k), w[m] + w[p] + A[q, r], (m, p, q, r)


def _run(theorem, families, tol, max_witnesses) -> HypothesisReport:
    breakdown = {}
    witnesses = []
    for name, (left, li, right, ri) in families:
        count, found = _collisions(left, li, right, ri, tol, max(0, max_witnesses - len(witnesses)))
        if count and not found and not witnesses:
            # The cap was exhausted by earlier families; keep one witness so
            # that an unsatisfied report is never witness-free.
            _, found = _collisions(left, li, right, ri, tol, 1)
        breakdown[name] = {"holds": count == 0, "collisions": count}
        witnesses.extend((name, a, b) for a, b in found)
    satisfied = all(v["holds"] for v in breakdown.values())
    if not satisfied and not witnesses:
        raise AssertionError("unsatisfied report without witnesses")
    return HypothesisReport(theorem, satisfied, witnesses, breakdown)


def _require_n(G: WeightedGraph, what: str):
    if G.n < 5:
        raise NotApplicableError(f"{what} needs n >= 5 (got n = {G.n})")


def _max(max_witnesses):
    return max(1, max_witnesses)


def check_generic_edge(
    G: WeightedGraph, tol: float | None = None, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> HypothesisReport:
    """``g_ij + g_jk != g_mp + g_qr`` for distinct ``i,j,k`` and distinct ``m,p,q,r``."""
    if G.domain.kind == VEC:
        raise DomainError("check_generic_edge needs scalar weights")
    _require_n(G, "the edge genericity theorem")
    tol = default_tolerance(G) if tol is None else tol
    A = _scalars(G, 1)
    return _run("generic-edge", [("alpha", _edge_family(A, A, G.n))], tol, _max(max_witnesses))


def _vector_edge_families(G: WeightedGraph, d: int):
    fams = []
    for l in range(1, d + 1):
        A = _scalars(G, l)
        fams.append((f"alpha{l}" if d > 1 else "alpha", _edge_family(A, A, G.n)))
    for l in range(1, d):
        fams.append((f"alpha{l},{l + 1}", _edge_family(_scalars(G, l), _scalars(G, l + 1), G.n)))
    return fams


def check_generic_vector_edge(
    G: WeightedGraph, tol: float | None = None, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> HypothesisReport:
    """The ``d`` per-component families and the ``d - 1`` mixed families."""
    _require_n(G, "the vector edge genericity theorem")
    tol = default_tolerance(G) if tol is None else tol
    d = G.domain.dim
    theorem = "generic-vector" if d > 1 else "generic-edge"
    return _run(theorem, _vector_edge_families(G, d), tol, _max(max_witnesses))


def check_generic_node(
    G: WeightedGraph,
    variant: str = "sum",
    tol: float | None = None,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
) -> HypothesisReport:
    """Node-weight genericity for consecutive component pairs ``(l, l + 1)``.

    ``variant="sum"`` tests ``w^l_i + w^l_j + w^(l+1)_j + w^(l+1)_k``, the sum
    that the beta distributions are built from; ``variant="product"`` tests
    ``w^l_i w^l_j + w^(l+1)_j w^(l+1)_k``. Which of the two is the intended
    hypothesis is not settled, so both are offered.
    """
    if variant not in ("sum", "product"):
        raise ValueError(f"variant must be 'sum' or 'product', got {variant!r}")
    d = G.domain.dim
    if d < 2:
        raise DomainError("node genericity needs node weights of dimension >= 2")
    _require_n(G, "the node genericity theorem")
    tol = default_tolerance(G) if tol is None else tol
    family = _node_sum_family if variant == "sum" else _node_product_family
    fams = []
    for l in range(1, d):
        a = np.diagonal(_scalars(G, l))
        b = np.diagonal(_scalars(G, l + 1))
        fams.append((f"beta{l},{l + 1}", family(a, b, G.n)))
    return _run(f"generic-node:{variant}", fams, tol, _max(max_witnesses))


def check_generic_combined(
    G: WeightedGraph,
    edge_dim: int | None = None,
    node_dim: int | None = None,
    tol: float | None = None,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
) -> HypothesisReport:
    """Node beta families over the node components, mixed edge families over
    the edge components, and the ``Delta^1`` family.

    ``edge_dim``/``node_dim`` default to the weight dimension; smaller values
    let a graph stored with ``d = max(d1, d2)`` ignore padding components.
    """
    _require_n(G, "the combined genericity theorem")
    d = G.domain.dim
    d1 = d if edge_dim is None else edge_dim
    d2 = d if node_dim is None else node_dim
    if d1 < 1 or d2 < 1:
        raise GraphError("the combined theorem needs both edge and node weights")
    if d1 > d or d2 > d:
        raise GraphError(f"edge/node dimensions ({d1}, {d2}) exceed the weight dimension {d}")
    tol = default_tolerance(G) if tol is None else tol
    fams = []
    for l in range(1, d2):
        a = np.diagonal(_scalars(G, l))
        b = np.diagonal(_scalars(G, l + 1))
        fams.append((f"beta{l},{l + 1}", _node_sum_family(a, b, G.n)))
    for l in range(1, d1):
        fams.append((f"alpha{l},{l + 1}", _edge_family(_scalars(G, l), _scalars(G, l + 1), G.n)))
    A = _scalars(G, 1)
    fams.append(("delta1", _delta_family(np.diagonal(A).copy(), A, G.n)))
    return _run("generic-combined", fams, tol, _max(max_witnesses))
