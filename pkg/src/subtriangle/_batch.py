"""Vectorized kernels over blocks of integer graphs with zero node weights.

A block is an ``(N, P)`` array of off-diagonal digits, one row per graph,
columns in lexicographic pair order. Every kernel agrees entrywise with the
corresponding single-graph function; the test suite checks this.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

INT64_LIMIT = 2**63


@lru_cache(maxsize=None)
def pair_table(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    return pairs, {p: s for s, p in enumerate(pairs)}


def digits_from_indices(indices: np.ndarray, n: int, m: int) -> np.ndarray:
    """Odometer digits: the first pair is most significant, the last fastest."""
    P = math.comb(n, 2)
    x = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((len(x), P), dtype=np.int64)
    for k in range(P - 1, -1, -1):
        out[:, k] = x % m
        x //= m
    return out


def surjective_mask(digits: np.ndarray, m: int) -> np.ndarray:
    ok = np.ones(len(digits), dtype=bool)
    for v in range(m):
        ok &= (digits == v).any(axis=1)
    return ok


def to_matrices(digits: np.ndarray, n: int) -> np.ndarray:
    pairs, _ = pair_table(n)
    A = np.zeros((len(digits), n, n), dtype=np.int64)
    for s, (a, b) in enumerate(pairs):
        A[:, a, b] = digits[:, s]
        A[:, b, a] = digits[:, s]
    return A


@lru_cache(maxsize=None)
def _power_matrix(n: int, m: int) -> np.ndarray:
    """Column ``c`` maps digits to the odometer index of the graph relabelled
    by the ``c``-th permutation: ``(digits @ M)[:, c]``."""
    pairs, idx = pair_table(n)
    P = len(pairs)
    weights = [m ** (P - 1 - s) for s in range(P)]
    perms = list(itertools.permutations(range(n)))
    dtype = np.float64 if m**P < 2**53 else np.int64
    M = np.zeros((P, len(perms)), dtype=dtype)
    for c, p in enumerate(perms):
        # Relabelled graph H[a, b] = G[p[a], p[b]]; H's s-th digit is G's
        # digit at the pair (p[a], p[b]).
        for s, (a, b) in enumerate(pairs):
            src = idx[tuple(sorted((p[a], p[b])))]
            M[src, c] = weights[s]
    return M


def canonical_codes(digits: np.ndarray, n: int, m: int, block: int = 1 << 22) -> np.ndarray:
    """Smallest odometer index over all relabellings; equal exactly on
    isomorphism classes."""
    M = _power_matrix(n, m)
    rows = max(1, block // M.shape[1])
    out = np.empty(len(digits), dtype=np.int64)
    D = digits.astype(M.dtype)
    for start in range(0, len(digits), rows):
        part = D[start:start + rows] @ M
        out[start:start + rows] = part.min(axis=1).astype(np.int64)
    return out


@lru_cache(maxsize=None)
def _triple_columns(n: int):
    _, idx = pair_table(n)
    return np.array(
        [(idx[(a, b)], idx[(a, c)], idx[(b, c)]) for a, b, c in itertools.combinations(range(n), 3)],
        dtype=np.intp,
    )


def triangle_rows(digits: np.ndarray, n: int, r: int) -> np.ndarray:
    """Sorted triangle codes per graph (node weights zero, pair code ``g*r``).

    Row ``t`` holds the base-``r**6`` digits of the distribution code, most
    significant first, so two rows are equal exactly when the codes are.
    """
    cols = _triple_columns(n)
    e = np.sort(digits[:, cols] * r, axis=2)
    codes = e[:, :, 0] * r**4 + e[:, :, 1] * r**2 + e[:, :, 2]
    return np.sort(codes, axis=1)


def row_to_code(row, r: int) -> int:
    base = r**6
    code = 0
    for c in row:
        code = code * base + int(c)
    return code


def charpoly_bound(n: int, wmax: int) -> int:
    """Upper bound on every intermediate magnitude in the batched recurrence."""
    return (n + 2) * (1 + n * max(wmax, 1)) ** (n + 1)


def charpolys(A: np.ndarray) -> np.ndarray:
    """Batched Berkowitz; rows of coefficients, highest degree first.

    Uses int64 when ``charpoly_bound`` proves it cannot overflow, and Python
    integers (object dtype) otherwise.
    """
    N, n, _ = A.shape
    wmax = int(np.abs(A).max()) if A.size else 0
    dtype = np.int64 if charpoly_bound(n, wmax) < INT64_LIMIT else object
    A = A.astype(dtype)
    poly = [np.ones(N, dtype=dtype), -A[:, 0, 0]]
    for r in range(1, n):
        R = A[:, r, :r]
        sub = A[:, :r, :r]
        v = A[:, :r, r]
        toeplitz = [np.ones(N, dtype=dtype), -A[:, r, r]]
        for _ in range(r):
            toeplitz.append(-(R * v).sum(axis=1))
            v = (sub * v[:, None, :]).sum(axis=2)
        poly = [
            sum(toeplitz[i - j] * poly[j] for j in range(min(i, r) + 1))
            for i in range(r + 2)
        ]
    return np.stack(poly, axis=1)
