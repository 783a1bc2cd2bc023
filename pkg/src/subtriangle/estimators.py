"""scikit-learn transformers that turn graphs into fingerprint feature rows.

The transformers are stateless: ``fit`` only validates its input, and
``transform`` maps a sequence of ``WeightedGraph`` objects to a 2-D array
whose rows compare equal for isomorphic graphs.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .graph import WeightedGraph
from .invariants import characteristic_polynomial, theorem_distributions, triangle_code


def check_graphs(X) -> list[WeightedGraph]:
    graphs = list(X)
    if not graphs:
        raise ValueError("expected at least one graph")
    for G in graphs:
        if not isinstance(G, WeightedGraph):
            raise TypeError(f"expected WeightedGraph, got {type(G).__name__}")
    n = graphs[0].n
    if any(G.n != n for G in graphs):
        raise ValueError("all graphs must have the same number of nodes")
    return graphs


class _Stateless(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        graphs = check_graphs(X)
        self.n_nodes_ = graphs[0].n
        return self

    def _graphs(self, X):
        graphs = check_graphs(X)
        if hasattr(self, "n_nodes_") and graphs[0].n != self.n_nodes_:
            raise ValueError(f"fitted on n = {self.n_nodes_}, got n = {graphs[0].n}")
        return graphs


class TriangleFingerprinter(_Stateless):
    """One row of sorted base-``r**6`` triangle digits per integer graph.

    Rows are the digits of ``encode_triangle_distribution`` (most significant
    first), so equal rows mean equal subtriangle distributions. ``r`` defaults
    to each graph's modulus.
    """

    def __init__(self, r: int | None = None):
        self.r = r

    def transform(self, X):
        rows = []
        for G in self._graphs(X):
            r = G.domain.m if self.r is None else self.r
            code = triangle_code(G, r)
            base = r**6
            digits = []
            for _ in range(math.comb(G.n, 3)):
                code, d = divmod(code, base)
                digits.append(d)
            rows.append(digits[::-1])
        return np.array(rows, dtype=object if max(max(r) for r in rows) >= 2**63 else np.int64)


class SpectrumFingerprinter(_Stateless):
    """Characteristic polynomial coefficients ``c_0..c_n`` per integer graph."""

    def transform(self, X):
        rows = [characteristic_polynomial(G).coefficients for G in self._graphs(X)]
        big = any(abs(c) >= 2**63 for row in rows for c in row)
        return np.array(rows, dtype=object if big else np.int64)


class DistributionFingerprinter(_Stateless):
    """Concatenated sorted distributions of one reconstruction theorem family."""

    def __init__(self, family: str = "edge", edge_dim: int | None = None, node_dim: int | None = None):
        self.family = family
        self.edge_dim = edge_dim
        self.node_dim = node_dim

    def transform(self, X):
        rows = []
        for G in self._graphs(X):
            dists = theorem_distributions(G, self.family, self.edge_dim, self.node_dim)
            rows.append(np.concatenate([np.asarray(D.values, dtype=np.float64) for D in dists.values()]))
        return np.vstack(rows)
