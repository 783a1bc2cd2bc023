"""Reconstructibility from the subtriangle distribution.

Hypothesis checkers for the distinct-weights theorem and its corollary, and a
constructive recovery of the node permutation between two graphs that follows
the staged argument over the uniquely weighted edges.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GraphError, NotApplicableError
from .graph import NodePermutation, WeightedGraph, _check_same_shape
from .invariants import default_tolerance

DEFAULT_MAX_WITNESSES = 10


@dataclass
class HypothesisReport:
    """Outcome of a hypothesis check.

    ``witnesses`` lists violating index tuples (1-based) and is empty exactly
    when the hypothesis is satisfied; checkers may stop collecting after a cap.
    """

    theorem: str
    satisfied: bool
    witnesses: list = field(default_factory=list)
    breakdown: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.satisfied == bool(self.witnesses):
            raise ValueError("a report is satisfied exactly when it has no witnesses")

    def to_dict(self, max_witnesses: int = DEFAULT_MAX_WITNESSES) -> dict:
        return {
            "theorem": self.theorem,
            "satisfied": self.satisfied,
            "condition_breakdown": self.breakdown,
            "witness_count": len(self.witnesses),
            "witnesses": [_listify(w) for w in self.witnesses[:max_witnesses]],
        }

    def to_text(self, max_witnesses: int = DEFAULT_MAX_WITNESSES) -> str:
        return json.dumps(self.to_dict(max_witnesses), indent=1, sort_keys=True)


def _listify(x):
    if isinstance(x, (tuple, list)):
        return [_listify(v) for v in x]
    return x


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _cells(G: WeightedGraph, pairs) -> np.ndarray:
    """Off-diagonal cells as rows of a float matrix (one column per component)."""
    w = G.matrix
    rows = np.array([w[i, j] for i, j in pairs], dtype=np.float64)
    return rows.reshape(len(pairs), -1)


def _node_cells(G: WeightedGraph) -> np.ndarray:
    return np.array([G.matrix[i, i] for i in range(G.n)], dtype=np.float64).reshape(G.n, -1)


def _sorted_rows(a: np.ndarray) -> np.ndarray:
    return a[np.lexsort(a.T[::-1])]


def _close_matrix(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Boolean matrix ``close[s, t]``: row ``a[s]`` equals ``b[t]`` within tol."""
    diff = np.abs(a[:, None, :] - b[None, :, :])
    if tol == 0:
        return np.all(diff == 0, axis=2)
    scale = np.maximum(1.0, np.maximum(np.abs(a[:, None, :]), np.abs(b[None, :, :])))
    return np.all(diff <= tol * scale, axis=2)


def _zero_mask(G: WeightedGraph, pairs, zero, tol) -> np.ndarray:
    z = np.asarray(G.domain.zero() if zero is None else zero, dtype=np.float64).reshape(1, -1)
    cells = _cells(G, pairs)
    if z.shape[1] != cells.shape[1]:
        raise GraphError("designated zero does not match the weight dimension")
    return _close_matrix(cells, z, tol)[:, 0]


@dataclass(frozen=True)
class UniqueEdgeReport:
    """``E``: off-diagonal pairs whose weight occurs exactly once; ``P``: all pairs."""

    E: frozenset
    P: tuple

    def neighbours(self, i: int) -> set[int]:
        return {b if a == i else a for a, b in self.E if i in (a, b)}


def _unique_mask(G: WeightedGraph, pairs, tol) -> np.ndarray:
    close = _close_matrix(_cells(G, pairs), _cells(G, pairs), tol)
    return close.sum(axis=1) == 1


def unique_edge_set(G: WeightedGraph, tol: float | None = None) -> UniqueEdgeReport:
    if G.n < 2:
        raise NotApplicableError("unique edges need n >= 2")
    tol = default_tolerance(G) if tol is None else tol
    pairs = _pairs(G.n)
    mask = _unique_mask(G, pairs, tol)
    E = frozenset((i + 1, j + 1) for (i, j), u in zip(pairs, mask) if u)
    return UniqueEdgeReport(E=E, P=tuple((i + 1, j + 1) for i, j in pairs))


def _require(G: WeightedGraph, floor: int, what: str):
    if G.n < floor:
        raise NotApplicableError(f"{what} needs n >= {floor} (got n = {G.n})")


def check_triangle_theorem(
    G: WeightedGraph,
    zero=None,
    tol: float | None = None,
) -> HypothesisReport:
    """Every pair must be (i) uniquely weighted, (ii) joined to a common node by
    two uniquely weighted pairs, or (iii) carry the designated zero weight."""
    _require(G, 3, "the subtriangle theorem")
    tol = default_tolerance(G) if tol is None else tol
    pairs = _pairs(G.n)
    unique = dict(zip(pairs, _unique_mask(G, pairs, tol)))
    is_zero = dict(zip(pairs, _zero_mask(G, pairs, zero, tol)))

    def in_e(a, b):
        return unique[(a, b) if a < b else (b, a)]

    counts = {"condition_i": 0, "condition_ii": 0, "condition_iii": 0, "failing": 0}
    witnesses = []
    for i, j in pairs:
        if unique[(i, j)]:
            counts["condition_i"] += 1
        elif any(in_e(i, k) and in_e(j, k) for k in range(G.n) if k not in (i, j)):
            counts["condition_ii"] += 1
        elif is_zero[(i, j)]:
            counts["condition_iii"] += 1
        else:
            counts["failing"] += 1
            witnesses.append((i + 1, j + 1))
    return HypothesisReport("triangle", not witnesses, witnesses, counts)


def check_corollary_distinct(
    G: WeightedGraph,
    zero=None,
    tol: float | None = None,
) -> HypothesisReport:
    """Every non-zero off-diagonal weight occurs exactly once."""
    _require(G, 3, "the distinct-weights corollary")
    tol = default_tolerance(G) if tol is None else tol
    pairs = _pairs(G.n)
    close = _close_matrix(_cells(G, pairs), _cells(G, pairs), tol)
    nonzero = ~_zero_mask(G, pairs, zero, tol)
    witnesses = []
    for s, t in itertools.combinations(range(len(pairs)), 2):
        if nonzero[s] and nonzero[t] and close[s, t]:
            (a, b), (c, d) = pairs[s], pairs[t]
            witnesses.append(((a + 1, b + 1), (c + 1, d + 1)))
    breakdown = {"nonzero_pairs": int(nonzero.sum()), "repeated_nonzero_pairs": len(witnesses)}
    return HypothesisReport("corollary", not witnesses, witnesses, breakdown)


class _SearchBudget(Exception):
    pass


def reconstruct_mapping(
    G: WeightedGraph,
    H: WeightedGraph,
    tol: float | None = None,
    search_budget: int = 200_000,
) -> NodePermutation | None:
    """Recover ``pi`` with ``G[i, j] == H[pi(i), pi(j)]`` for all ``i, j``.

    The uniquely weighted pairs fix a pair bijection; nodes with two or more
    such pairs are placed by intersecting images, nodes with exactly one are
    placed next to their partner, and the rest are assigned by a consistency
    search. The result always passes a full entrywise check, so
    ``apply_permutation(H, pi) == G``. ``None`` means no map was found; it
    certifies non-isomorphism only when ``G`` satisfies the theorem's
    hypothesis or the search ran to completion.
    """
    _check_same_shape(G, H)
    tol = default_tolerance(G) if tol is None else tol
    n = G.n
    g, h = G.matrix, H.matrix

    def same(x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if tol == 0:
            return bool(np.all(x == y))
        return bool(np.all(np.abs(x - y) <= tol * np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))))

    pairs = _pairs(n)
    cg, ch = _cells(G, pairs), _cells(H, pairs)
    # Both graphs must carry the same multisets of edge and node weights.
    for a, b in ((cg, ch), (_node_cells(G), _node_cells(H))):
        if not _close_matrix(_sorted_rows(a), _sorted_rows(b), tol).diagonal().all():
            return None

    unique_g = _unique_mask(G, pairs, tol)
    unique_h = _unique_mask(H, pairs, tol)
    cross = _close_matrix(cg, ch, tol)
    phi: dict[tuple[int, int], tuple[int, int]] = {}
    for s, pair in enumerate(pairs):
        if not unique_g[s]:
            continue
        hits = [t for t in np.flatnonzero(cross[s]) if unique_h[t]]
        if len(hits) != 1:
            return None
        phi[pair] = pairs[hits[0]]

    nbrs: list[set[int]] = [set() for _ in range(n)]
    for a, b in phi:
        nbrs[a].add(b)
        nbrs[b].add(a)

    def img(a, b):
        return phi[(a, b) if a < b else (b, a)]

    pi = [-1] * n
    inner = [i for i in range(n) if len(nbrs[i]) >= 2]
    inner_set = set(inner)
    for i in inner:
        common = set.intersection(*(set(img(i, j)) for j in nbrs[i]))
        if len(common) != 1:
            return None
        pi[i] = common.pop()

    b0 = [j for j in range(n) if len(nbrs[j]) == 1 and next(iter(nbrs[j])) in inner_set]
    for j in b0:
        (i,) = nbrs[j]
        image = img(i, j)
        if pi[i] not in image:
            return None
        pi[j] = image[0] if image[1] == pi[i] else image[1]

    b1_pairs = sorted(
        {(min(i, j), max(i, j)) for i in range(n) if len(nbrs[i]) == 1
         for j in nbrs[i] if len(nbrs[j]) == 1}
    )
    fixed = [i for i in range(n) if pi[i] >= 0]
    if len({pi[i] for i in fixed}) != len(fixed):
        return None
    if not all(same(g[x, x], h[pi[x], pi[x]]) for x in fixed):
        return None
    if not all(same(g[x, y], h[pi[x], pi[y]]) for x, y in itertools.combinations(fixed, 2)):
        return None

    placed = set(b for pair in b1_pairs for b in pair)
    rest = [v for v in range(n) if pi[v] < 0 and v not in placed]
    taken = [False] * n
    for i in fixed:
        taken[pi[i]] = True
    assigned = list(fixed)
    steps = [0]

    def fits(v, u):
        if taken[u] or not same(g[v, v], h[u, u]):
            return False
        return all(same(g[v, a], h[u, pi[a]]) for a in assigned)

    def place(v, u):
        pi[v] = u
        taken[u] = True
        assigned.append(v)

    def unplace(v):
        taken[pi[v]] = False
        pi[v] = -1
        assigned.pop()

    def search(k):
        steps[0] += 1
        if steps[0] > search_budget:
            raise _SearchBudget
        if k < len(b1_pairs):
            i, j = b1_pairs[k]
            l, m = img(i, j)
            for a, b in ((l, m), (m, l)):
                if fits(i, a):
                    place(i, a)
                    if fits(j, b):
                        place(j, b)
                        if search(k + 1):
                            return True
                        unplace(j)
                    unplace(i)
            return False
        idx = k - len(b1_pairs)
        if idx == len(rest):
            return True
        v = rest[idx]
        for u in range(n):
            if fits(v, u):
                place(v, u)
                if search(k + 1):
                    return True
                unplace(v)
        return False

    try:
        if not search(0):
            return None
    except _SearchBudget:
        return None

    result = NodePermutation.from_zero_based(pi)
    p = result.zero_based()
    if not (np.array_equal(g, h[np.ix_(p, p)]) if tol == 0 else same(g, h[np.ix_(p, p)])):
        return None
    return result
