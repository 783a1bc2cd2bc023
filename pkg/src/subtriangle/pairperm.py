"""Permutations of node pairs and their relation to node permutations.

A bijection ``phi`` on the ``C(n, 2)`` unordered pairs is *induced* by a node
permutation ``pi`` when ``phi({i, j}) = {pi(i), pi(j)}``. For ``n >= 5`` this
holds exactly when ``phi`` maps every two pairs that share a node to two pairs
that share a node; ``lemma31_census`` checks that equivalence exhaustively.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError, NotApplicableError
from .graph import NodePermutation

LEMMA_FLOOR = 5
DEFAULT_LEMMA_BUDGET = math.factorial(10)


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    """Pairs ``(i, j)``, ``1 <= i < j <= n``, in lexicographic order."""
    return tuple(itertools.combinations(range(1, n + 1), 2))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict:
    return {p: s for s, p in enumerate(pair_list(n))}


@dataclass(frozen=True)
class PairPermutation:
    """Bijection on the pairs of ``{1..n}``; ``images[s]`` is the index (in
    ``pair_list(n)`` order) of the image of the ``s``-th pair."""

    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        size = math.comb(self.n, 2)
        if sorted(self.images) != list(range(size)):
            raise ValueError(f"images must be a permutation of 0..{size - 1}")

    @classmethod
    def from_mapping(cls, n: int, mapping: dict) -> "PairPermutation":
        idx = _pair_index(n)
        norm = {tuple(sorted(k)): tuple(sorted(v)) for k, v in mapping.items()}
        try:
            images = tuple(idx[norm[p]] for p in pair_list(n))
        except KeyError as exc:
            raise ValueError(f"mapping is not total on the pairs of 1..{n}: {exc}") from exc
        return cls(n, images)

    @classmethod
    def induced(cls, pi: NodePermutation) -> "PairPermutation":
        return cls.from_mapping(pi.n, {p: (pi(p[0]), pi(p[1])) for p in pair_list(pi.n)})

    @classmethod
    def identity(cls, n: int) -> "PairPermutation":
        return cls(n, tuple(range(math.comb(n, 2))))

    def __call__(self, pair) -> tuple[int, int]:
        i, j = sorted(pair)
        return pair_list(self.n)[self.images[_pair_index(self.n)[(i, j)]]]


def _require(n: int):
    if n < LEMMA_FLOOR:
        raise NotApplicableError(f"the pair-permutation lemma needs n >= {LEMMA_FLOOR} (got n = {n})")


@lru_cache(maxsize=None)
def _tables(n: int):
    """Index tables shared by the scalar and batched checks.

    ``adj``: (a, b) index pairs of distinct pairs sharing a node.
    ``meets``: boolean matrix, pairs ``s`` and ``t`` share a node.
    ``through``: for each node, two pair indices containing it.
    ``ends``: (C(n,2), 2) zero-based endpoints of each pair.
    """
    pairs = [(i - 1, j - 1) for i, j in pair_list(n)]
    size = len(pairs)
    meets = np.zeros((size, size), dtype=bool)
    for s, t in itertools.product(range(size), repeat=2):
        meets[s, t] = bool(set(pairs[s]) & set(pairs[t]))
    adj = np.array(
        [(s, t) for s, t in itertools.combinations(range(size), 2) if meets[s, t]], dtype=np.intp
    )
    idx = {p: s for s, p in enumerate(pairs)}
    through = np.array(
        [[idx[tuple(sorted((v, w)))] for w in range(n) if w != v][:2] for v in range(n)],
        dtype=np.intp,
    )
    ends = np.array(pairs, dtype=np.intp)
    return adj, meets, through, ends


def pair_perm_adjacency_property(phi: PairPermutation, n: int | None = None) -> bool:
    """True iff pairs sharing a node always map to pairs sharing a node."""
    n = phi.n if n is None else n
    _require(n)
    if n != phi.n:
        raise ValueError(f"pair permutation is on n = {phi.n}, not {n}")
    adj, meets, _, _ = _tables(n)
    img = np.asarray(phi.images)
    return bool(meets[img[adj[:, 0]], img[adj[:, 1]]].all())


def decompose_pair_perm(phi: PairPermutation, n: int | None = None) -> NodePermutation | None:
    """Recover ``pi`` with ``phi({i, j}) = {pi(i), pi(j)}``, or ``None``.

    Each ``pi(i)`` is read off as the common node of the images of two pairs
    through ``i``; the candidate is then checked on every pair.
    """
    n = phi.n if n is None else n
    _require(n)
    if n != phi.n:
        raise ValueError(f"pair permutation is on n = {phi.n}, not {n}")
    _, _, through, ends = _tables(n)
    img = phi.images
    pi = []
    for v in range(n):
        common = set(ends[img[through[v, 0]]]) & set(ends[img[through[v, 1]]])
        if len(common) != 1:
            return None
        pi.append(int(common.pop()))
    for s, (a, b) in enumerate(ends):
        if set(ends[img[s]]) != {pi[a], pi[b]}:
            return None
    return NodePermutation.from_zero_based(pi)


def batch_property(images: np.ndarray, n: int) -> np.ndarray:
    """Vectorized ``pair_perm_adjacency_property`` over rows of ``images``."""
    adj, meets, _, _ = _tables(n)
    ok = np.ones(len(images), dtype=bool)
    for a, b in adj:
        ok &= meets[images[:, a], images[:, b]]
    return ok


def batch_decomposable(images: np.ndarray, n: int) -> np.ndarray:
    """Vectorized success flag of ``decompose_pair_perm`` over rows of ``images``."""
    _, _, through, ends = _tables(n)
    rows = len(images)
    ok = np.ones(rows, dtype=bool)
    pi = np.zeros((rows, n), dtype=np.intp)
    for v in range(n):
        e1 = ends[images[:, through[v, 0]]]
        e2 = ends[images[:, through[v, 1]]]
        hit = e1[:, :, None] == e2[:, None, :]
        count = hit.sum(axis=(1, 2))
        ok &= count == 1
        first = hit.any(axis=2)[:, 0]
        pi[:, v] = np.where(first, e1[:, 0], e1[:, 1])
    for s, (a, b) in enumerate(ends):
        got = ends[images[:, s]]
        pa, pb = pi[:, a], pi[:, b]
        ok &= ((got[:, 0] == pa) & (got[:, 1] == pb)) | ((got[:, 0] == pb) & (got[:, 1] == pa))
    return ok


@dataclass(frozen=True)
class LemmaCensus:
    """``agree``: the property holders, the decomposable permutations and the
    induced permutations are the same set."""

    n: int
    total: int
    induced: int
    property_holders: int
    decomposable: int
    agree: bool

    def to_text(self) -> str:
        return (
            f"n={self.n} total={self.total} induced={self.induced} "
            f"property={self.property_holders} decomposable={self.decomposable} "
            f"equivalent={'yes' if self.agree else 'no'}"
        )


def _chunk(args):
    n, first = args
    size = math.comb(n, 2)
    others = [x for x in range(size) if x != first]
    count = math.factorial(size - 1)
    tail = np.fromiter(
        itertools.chain.from_iterable(itertools.permutations(others)),
        dtype=np.int8,
        count=count * (size - 1),
    ).reshape(count, size - 1)
    images = np.empty((count, size), dtype=np.intp)
    images[:, 0] = first
    images[:, 1:] = tail
    prop = batch_property(images, n)
    dec = batch_decomposable(images, n)
    holders = [tuple(int(x) for x in row) for row in images[prop]]
    return int(prop.sum()), int(dec.sum()), int((prop != dec).sum()), holders


def lemma31_census(n: int = 5, workers: int = 1, budget_override: bool = False) -> LemmaCensus:
    """Check the property/decomposition equivalence over every pair permutation."""
    _require(n)
    size = math.comb(n, 2)
    total = math.factorial(size)
    if total > DEFAULT_LEMMA_BUDGET and not budget_override:
        raise BudgetError(f"{total} pair permutations exceed the budget", estimated_size=total)
    jobs = [(n, first) for first in range(size)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, jobs))
    else:
        parts = [_chunk(j) for j in jobs]
    prop = sum(p[0] for p in parts)
    dec = sum(p[1] for p in parts)
    mismatches = sum(p[2] for p in parts)
    holders = {h for p in parts for h in p[3]}
    induced = {
        PairPermutation.induced(NodePermutation(perm)).images
        for perm in itertools.permutations(range(1, n + 1))
    }
    agree = mismatches == 0 and holders == induced
    return LemmaCensus(n, total, len(induced), prop, dec, agree)
