"""Class functions: subtriangle distributions, one-dimensional weight
distributions and the exact characteristic polynomial."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, GraphError, NotApplicableError
from .graph import INT, VEC, WeightedGraph

DEFAULT_TOLERANCE = 1e-9


class Multiset:
    """Immutable value -> multiplicity map with a canonical (sorted) order."""

    __slots__ = ("_items",)

    def __init__(self, elements: Iterable = ()):
        self._items = tuple(sorted(Counter(elements).items()))

    @classmethod
    def from_counts(cls, counts) -> "Multiset":
        ms = cls.__new__(cls)
        items = dict(counts).items()
        if any(int(c) < 1 for _, c in items):
            raise ValueError("multiplicities must be positive")
        ms._items = tuple(sorted((v, int(c)) for v, c in items))
        return ms

    def items(self) -> tuple:
        return self._items

    def support(self) -> tuple:
        return tuple(v for v, _ in self._items)

    def multiplicity(self, value) -> int:
        for v, c in self._items:
            if v == value:
                return c
        return 0

    def total(self) -> int:
        return sum(c for _, c in self._items)

    def elements(self):
        for v, c in self._items:
            yield from itertools.repeat(v, c)

    def __contains__(self, value):
        return self.multiplicity(value) > 0

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        body = ", ".join(f"{v!r}: {c}" for v, c in self._items)
        return f"{type(self).__name__}({{{body}}})"


@dataclass(frozen=True, order=True)
class Triangle:
    """Subtriangle: three (edge weight, opposite node weight) pairs, unordered.

    The pairs are kept sorted so that equal multisets compare equal.
    """

    pairs: tuple

    def __post_init__(self):
        if len(self.pairs) != 3:
            raise ValueError("a subtriangle holds exactly three pairs")
        object.__setattr__(self, "pairs", tuple(sorted(tuple(p) for p in self.pairs)))

    def edge_weights(self) -> tuple:
        return tuple(p[0] for p in self.pairs)

    def node_weights(self) -> tuple:
        return tuple(p[1] for p in self.pairs)


class TriangleDistribution(Multiset):
    """Multiset of the ``C(n, 3)`` subtriangles of a graph."""

    __slots__ = ()

    def edge_weight_multiset(self) -> Multiset:
        """First components of all pairs; every edge weight appears ``n - 2`` times."""
        return Multiset(g for t in self.elements() for g in t.edge_weights())

    def node_weight_multiset(self) -> Multiset:
        """Second components; every node weight appears ``C(n - 1, 2)`` times."""
        return Multiset(w for t in self.elements() for w in t.node_weights())


def _cell_values(G: WeightedGraph) -> list:
    if G.domain.kind == VEC:
        return [[tuple(cell) for cell in row] for row in G.matrix.tolist()]
    return G.matrix.tolist()


def _require_triangles(G: WeightedGraph):
    if G.n < 3:
        raise NotApplicableError(f"subtriangles need n >= 3 (got n = {G.n})")


def subtriangle(G: WeightedGraph, i: int, j: int, k: int) -> Triangle:
    """The multiset {(g_ij, w_k), (g_ik, w_j), (g_jk, w_i)}; indices 1-based."""
    _require_triangles(G)
    if len({i, j, k}) != 3:
        raise GraphError(f"subtriangle needs three distinct nodes, got {(i, j, k)}")
    return Triangle(
        (
            (G.weight(i, j), G.weight(k, k)),
            (G.weight(i, k), G.weight(j, j)),
            (G.weight(j, k), G.weight(i, i)),
        )
    )


def triangle_distribution(G: WeightedGraph) -> TriangleDistribution:
    _require_triangles(G)
    W = _cell_values(G)
    tris = []
    for i, j, k in itertools.combinations(range(G.n), 3):
        tris.append(Triangle(((W[i][j], W[k][k]), (W[i][k], W[j][j]), (W[j][k], W[i][i]))))
    return TriangleDistribution(tris)


def encode_triangle_distribution(T: TriangleDistribution, r: int) -> int:
    """Injective integer code of a subtriangle distribution with weights in [0, r).

    A pair becomes ``g*r + w``; a triangle with sorted pair codes
    ``a1 <= a2 <= a3`` becomes ``a1*r**4 + a2*r**2 + a3``; the sorted triangle
    codes are the base ``r**6`` digits of the result, smallest first.
    """
    if r < 1:
        raise ValueError("weight bound r must be positive")
    codes = []
    for tri, mult in T.items():
        pair_codes = []
        for g, w in tri.pairs:
            for x in (g, w):
                if isinstance(x, (tuple, float)) or not 0 <= x < r:
                    raise DomainError(f"weight {x!r} is not an integer in [0, {r - 1}]")
            pair_codes.append(g * r + w)
        a1, a2, a3 = sorted(pair_codes)
        codes.extend([a1 * r**4 + a2 * r**2 + a3] * mult)
    base = r**6
    code = 0
    for c in sorted(codes):
        code = code * base + c
    return code


def triangle_code(G: WeightedGraph, r: int | None = None) -> int:
    """Triangle fingerprint of an integer graph; ``r`` defaults to the modulus m."""
    if G.domain.kind != INT:
        raise DomainError("triangle codes need integer weights")
    return encode_triangle_distribution(triangle_distribution(G), G.domain.m if r is None else r)


class Distribution:
    """Sorted sequence of scalars; ``==`` is exact, ``equals`` takes a tolerance."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.sort(np.asarray(values).ravel())
        if arr.dtype.kind not in "if":
            arr = arr.astype(np.float64)
        arr.setflags(write=False)
        self.values = arr

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values.tolist())

    def tolist(self) -> list:
        return self.values.tolist()

    def equals(self, other: "Distribution", tol: float = DEFAULT_TOLERANCE) -> bool:
        return distributions_equal(self, other, tol)

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return distributions_equal(self, other, 0.0)

    def __hash__(self):
        return hash(self.values.astype(np.float64).tobytes())

    def __repr__(self):
        return f"Distribution({self.tolist()!r})"


def distributions_equal(D: Distribution, E: Distribution, tol: float = 0.0) -> bool:
    """Same length and pairwise ``|a - b| <= tol * max(1, |a|, |b|)``."""
    a, b = D.values, E.values
    if a.shape != b.shape:
        return False
    if tol == 0:
        return bool(np.array_equal(a, b))
    a = a.astype(np.float64)
    b = b.astype(np.float64)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return bool(np.all(np.abs(a - b) <= tol * scale))


def default_tolerance(G: WeightedGraph) -> float:
    return 0.0 if G.domain.exact else DEFAULT_TOLERANCE


@lru_cache(maxsize=None)
def ordered_triples(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index arrays (0-based) of all ordered pairwise-distinct triples."""
    t = np.array(list(itertools.permutations(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    return t[:, 0], t[:, 1], t[:, 2]


@lru_cache(maxsize=None)
def centered_pairs(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Triples ``(i, j, k)`` with centre ``j`` and ``i < k``: ``n * C(n-1, 2)`` rows."""
    rows = [(i, j, k) for j in range(n) for i, k in itertools.combinations(range(n), 2) if j not in (i, k)]
    t = np.array(rows, dtype=np.intp).reshape(-1, 3)
    return t[:, 0], t[:, 1], t[:, 2]


def _component(G: WeightedGraph, l: int) -> np.ndarray:
    dim = G.domain.dim
    if not 1 <= l <= dim:
        raise GraphError(f"component {l} out of range 1..{dim}")
    if G.domain.kind == VEC:
        return G.matrix[:, :, l - 1]
    return G.matrix


def _scalar_only(G: WeightedGraph, what: str):
    if G.domain.kind == VEC:
        raise DomainError(f"{what} needs scalar weights; use the per-component variant")


def component_distribution(G: WeightedGraph, l: int = 1) -> Distribution:
    """Sorted off-diagonal values of weight component ``l``: ``C(n, 2)`` values."""
    A = _component(G, l)
    iu = np.triu_indices(G.n, k=1)
    return Distribution(A[iu])


def edge_weight_distribution(G: WeightedGraph) -> Distribution:
    _scalar_only(G, "edge_weight_distribution")
    return component_distribution(G, 1)


def adjacent_sum_component(G: WeightedGraph, l: int = 1) -> Distribution:
    """Sums ``g_ij + g_jk`` of component ``l`` over centre ``j`` and ``i < k``."""
    _require_triangles(G)
    A = _component(G, l)
    i, j, k = centered_pairs(G.n)
    return Distribution(A[i, j] + A[j, k])


def adjacent_sum_distribution(G: WeightedGraph) -> Distribution:
    _scalar_only(G, "adjacent_sum_distribution")
    return adjacent_sum_component(G, 1)


def mixed_adjacent_sum(G: WeightedGraph, l: int) -> Distribution:
    """``g^l_ij + g^(l+1)_jk`` over all ordered distinct triples."""
    _require_triangles(G)
    if not 1 <= l < G.domain.dim:
        raise GraphError(f"mixed sum index {l} out of range 1..{G.domain.dim - 1}")
    A, B = _component(G, l), _component(G, l + 1)
    i, j, k = ordered_triples(G.n)
    return Distribution(A[i, j] + B[j, k])


def node_component_distribution(G: WeightedGraph, l: int = 1) -> Distribution:
    return Distribution(np.diagonal(_component(G, l)).copy())


def node_beta_distribution(G: WeightedGraph, l: int) -> Distribution:
    """``w^l_i + w^l_j + w^(l+1)_j + w^(l+1)_k`` over ordered distinct triples."""
    if G.domain.dim < 2:
        raise DomainError("beta sums need node weights of dimension >= 2")
    _require_triangles(G)
    if not 1 <= l < G.domain.dim:
        raise GraphError(f"beta index {l} out of range 1..{G.domain.dim - 1}")
    a = np.diagonal(_component(G, l))
    b = np.diagonal(_component(G, l + 1))
    i, j, k = ordered_triples(G.n)
    return Distribution(a[i] + a[j] + b[j] + b[k])


def delta_distribution(
    G: WeightedGraph, l: int = 1, edge_dim: int | None = None, node_dim: int | None = None
) -> Distribution:
    """``w^l_i + w^l_j + g^l_jk`` over ordered distinct triples, ``l <= min(d1, d2)``."""
    _require_triangles(G)
    d1 = G.domain.dim if edge_dim is None else edge_dim
    d2 = G.domain.dim if node_dim is None else node_dim
    if not 1 <= l <= min(d1, d2, G.domain.dim):
        raise GraphError(f"delta index {l} out of range 1..{min(d1, d2)}")
    A = _component(G, l)
    w = np.diagonal(A)
    i, j, k = ordered_triples(G.n)
    return Distribution(w[i] + w[j] + A[j, k])


FAMILIES = ("edge", "vector-edge", "node", "combined")


def theorem_distributions(
    G: WeightedGraph,
    family: str,
    edge_dim: int | None = None,
    node_dim: int | None = None,
) -> dict[str, Distribution]:
    """The list of distributions a reconstruction theorem relies on.

    ``edge``: D_g, D_alpha. ``vector-edge``: D_g^l, D_alpha^l, D_alpha^(l,l+1).
    ``node``: D_w^l, D_beta^(l,l+1). ``combined``: node components up to
    ``node_dim``, edge components up to ``edge_dim``, and D_Delta^1.
    """
    d = G.domain.dim
    out: dict[str, Distribution] = {}
    if family == "edge":
        out["dg"] = edge_weight_distribution(G)
        out["dalpha"] = adjacent_sum_distribution(G)
    elif family == "vector-edge":
        for l in range(1, d + 1):
            out[f"dg{l}"] = component_distribution(G, l)
        for l in range(1, d + 1):
            out[f"dalpha{l}"] = adjacent_sum_component(G, l)
        for l in range(1, d):
            out[f"dalpha{l},{l + 1}"] = mixed_adjacent_sum(G, l)
    elif family == "node":
        for l in range(1, d + 1):
            out[f"dw{l}"] = node_component_distribution(G, l)
        for l in range(1, d):
            out[f"dbeta{l},{l + 1}"] = node_beta_distribution(G, l)
    elif family == "combined":
        d1 = d if edge_dim is None else edge_dim
        d2 = d if node_dim is None else node_dim
        if not (1 <= d1 <= d and 1 <= d2 <= d):
            raise GraphError(f"edge/node dimensions ({d1}, {d2}) must lie in 1..{d}")
        for l in range(1, d2 + 1):
            out[f"dw{l}"] = node_component_distribution(G, l)
        for l in range(1, d2):
            out[f"dbeta{l},{l + 1}"] = node_beta_distribution(G, l)
        for l in range(1, d1 + 1):
            out[f"dg{l}"] = component_distribution(G, l)
        for l in range(1, d1):
            out[f"dalpha{l},{l + 1}"] = mixed_adjacent_sum(G, l)
        out["ddelta1"] = delta_distribution(G, 1, d1, d2)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    return out


@dataclass(frozen=True)
class CharPoly:
    """Exact coefficients ``c_0..c_n`` of ``det(x I - A)``, lowest degree first."""

    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self):
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if power == 1 else f"x^{power}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def berkowitz(A: list[list[int]]) -> list[int]:
    """Characteristic polynomial coefficients, highest degree first, by the
    division-free Berkowitz recurrence over Python integers."""
    n = len(A)
    poly = [1, -A[0][0]]
    for r in range(1, n):
        R = A[r][:r]
        col = [A[t][r] for t in range(r)]
        toeplitz = [1, -A[r][r]]
        v = col
        for _ in range(r):
            toeplitz.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(A[p][q] * v[q] for q in range(r)) for p in range(r)]
        poly = [
            sum(toeplitz[i - j] * poly[j] for j in range(min(i, r) + 1))
            for i in range(r + 2)
        ]
    return poly


def characteristic_polynomial(G: WeightedGraph) -> CharPoly:
    """Exact ``det(x I - A)`` of the weight matrix (diagonal = node weights)."""
    if G.domain.kind != INT:
        raise DomainError("exact characteristic polynomial needs integer weights")
    desc = berkowitz(G.matrix.tolist())
    return CharPoly(tuple(int(c) for c in reversed(desc)))


__all__ = [
    "CharPoly",
    "Distribution",
    "Multiset",
    "Triangle",
    "TriangleDistribution",
    "adjacent_sum_component",
    "adjacent_sum_distribution",
    "berkowitz",
    "characteristic_polynomial",
    "component_distribution",
    "default_tolerance",
    "delta_distribution",
    "distributions_equal",
    "edge_weight_distribution",
    "encode_triangle_distribution",
    "mixed_adjacent_sum",
    "node_beta_distribution",
    "node_component_distribution",
    "subtriangle",
    "theorem_distributions",
    "triangle_code",
    "triangle_distribution",
]
