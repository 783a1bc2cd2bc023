"""Complete weighted graphs, node permutations and exact isomorphism testing.

Nodes are numbered ``1..n`` on every public interface; arrays are 0-based
internally. The diagonal entry ``g[i, i]`` is the node weight ``w_i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .errors import DomainError, GraphError

INT = "int"
REAL = "real"
VEC = "vec"

DEFAULT_CANONICAL_CAP = 10


@dataclass(frozen=True)
class Domain:
    """Weight domain tag: ``int`` (values ``0..m-1``), ``real`` or ``vec`` (R^d)."""

    kind: str
    m: int | None = None
    d: int | None = None

    def __post_init__(self):
        if self.kind == INT:
            if self.m is None or int(self.m) < 1:
                raise GraphError("integer domain needs a modulus m >= 1")
            if self.d is not None:
                raise GraphError("integer domain takes no dimension d")
        elif self.kind == REAL:
            if self.m is not None or self.d is not None:
                raise GraphError("real domain takes neither m nor d")
        elif self.kind == VEC:
            if self.d is None or int(self.d) < 1:
                raise GraphError("vector domain needs a dimension d >= 1")
            if self.m is not None:
                raise GraphError("vector domain takes no modulus m")
        else:
            raise GraphError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def integer(cls, m: int) -> "Domain":
        return cls(INT, m=int(m))

    @classmethod
    def real(cls) -> "Domain":
        return cls(REAL)

    @classmethod
    def vector(cls, d: int) -> "Domain":
        return cls(VEC, d=int(d))

    @property
    def dim(self) -> int:
        """Number of scalar components per weight."""
        return self.d if self.kind == VEC else 1

    @property
    def exact(self) -> bool:
        return self.kind == INT

    def zero(self):
        if self.kind == INT:
            return 0
        if self.kind == REAL:
            return 0.0
        return (0.0,) * self.d


def _as_int(value, m):
    if isinstance(value, (bool, np.bool_)):
        raise GraphError(f"boolean weight {value!r} in integer domain")
    if isinstance(value, (int, np.integer)):
        v = int(value)
    elif isinstance(value, (float, np.floating)) and float(value).is_integer():
        v = int(value)
    else:
        raise GraphError(f"non-integer weight {value!r} in integer domain")
    if not 0 <= v < m:
        raise GraphError(f"weight {v} outside [0, {m - 1}]")
    return v


def _as_real(value):
    if isinstance(value, (bool, np.bool_)) or not isinstance(
        value, (int, float, np.integer, np.floating)
    ):
        raise GraphError(f"non-scalar weight {value!r} in real domain")
    v = float(value)
    if not math.isfinite(v):
        raise GraphError(f"non-finite weight {value!r}")
    return v


def _as_vec(value, d):
    if isinstance(value, (int, float, np.integer, np.floating)):
        raise GraphError(f"scalar weight {value!r} in vector domain of dimension {d}")
    try:
        comps = [_as_real(c) for c in value]
    except TypeError:
        raise GraphError(f"weight {value!r} is not a vector") from None
    if len(comps) != d:
        raise GraphError(f"vector weight of dimension {len(comps)}, expected {d}")
    return comps


class WeightedGraph:
    """Immutable complete undirected graph with node and edge weights.

    Weights are held in a read-only array of shape ``(n, n)`` (int64 for the
    integer domain, float64 for reals) or ``(n, n, d)`` for vectors.
    Symmetry is structural: ``(i, j)`` and ``(j, i)`` address the same cell.
    """

    __slots__ = ("n", "domain", "_w")

    def __init__(self, weights: np.ndarray, domain: Domain):
        w = np.array(weights, dtype=np.int64 if domain.exact else np.float64)
        expected_ndim = 3 if domain.kind == VEC else 2
        if w.ndim != expected_ndim or w.shape[0] != w.shape[1]:
            raise GraphError(f"weight array of shape {w.shape} does not fit domain {domain.kind}")
        if domain.kind == VEC and w.shape[2] != domain.d:
            raise GraphError(f"vector weights of dimension {w.shape[2]}, expected {domain.d}")
        if w.shape[0] < 1:
            raise GraphError("a graph needs at least one node")
        axes = (1, 0, 2) if w.ndim == 3 else (1, 0)
        if not np.array_equal(w, w.transpose(axes)):
            raise GraphError("weight array is not symmetric")
        if domain.exact and w.size and (w.min() < 0 or w.max() >= domain.m):
            raise GraphError(f"integer weights must lie in [0, {domain.m - 1}]")
        if not domain.exact and not np.all(np.isfinite(w)):
            raise GraphError("non-finite weight")
        w.setflags(write=False)
        self.n = int(w.shape[0])
        self.domain = domain
        self._w = w

    @classmethod
    def from_matrix(cls, matrix, domain: Domain | None = None) -> "WeightedGraph":
        """Build from a full symmetric matrix. Without ``domain`` an integer
        matrix gets ``m = max + 1`` and a float matrix the real domain."""
        arr = np.asarray(matrix)
        if domain is None:
            if arr.ndim == 3:
                domain = Domain.vector(arr.shape[2])
            elif np.issubdtype(arr.dtype, np.integer):
                domain = Domain.integer(max(int(arr.max()) + 1, 2) if arr.size else 2)
            else:
                domain = Domain.real()
        return cls(arr, domain)

    @property
    def matrix(self) -> np.ndarray:
        """Read-only weight array (diagonal = node weights)."""
        return self._w

    def weight(self, i: int, j: int):
        """Weight of the pair ``{i, j}`` (1-based); ``weight(i, i)`` is ``w_i``."""
        for k in (i, j):
            if not isinstance(k, (int, np.integer)) or not 1 <= k <= self.n:
                raise GraphError(f"node index {k!r} out of range 1..{self.n}")
        return self._value(self._w[i - 1, j - 1])

    def node_weight(self, i: int):
        return self.weight(i, i)

    def _value(self, cell):
        if self.domain.kind == INT:
            return int(cell)
        if self.domain.kind == REAL:
            return float(cell)
        return tuple(float(c) for c in cell)

    def component(self, l: int) -> np.ndarray:
        """``(n, n)`` float array of the ``l``-th weight component (1-based)."""
        dim = self.domain.dim
        if not 1 <= l <= dim:
            raise GraphError(f"component {l} out of range 1..{dim}")
        if self.domain.kind == VEC:
            return self._w[:, :, l - 1].astype(np.float64)
        return self._w.astype(np.float64)

    def pairs(self, diagonal: bool = True) -> Iterator[tuple[int, int]]:
        """Unordered pairs ``(i, j)``, ``i <= j``, ordered by ``(i, j)``."""
        for i in range(1, self.n + 1):
            for j in range(i if diagonal else i + 1, self.n + 1):
                yield i, j

    def permute(self, pi: "NodePermutation") -> "WeightedGraph":
        return apply_permutation(self, pi)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self._w, other._w)

    def __hash__(self):
        return hash((self.domain, self._w.shape, self._w.tobytes()))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, domain={self.domain.kind}, m={self.domain.m}, d={self.domain.d})"


def new_graph(
    n: int,
    entries: Mapping[tuple[int, int], object],
    domain: Domain,
    default=None,
) -> WeightedGraph:
    """Build a graph from a ``{(i, j): weight}`` map with 1-based indices.

    Keys may be given as ``(i, j)`` or ``(j, i)``; every one of the
    ``C(n, 2) + n`` pairs must be covered unless ``default`` is supplied.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise GraphError(f"node count must be a positive integer, got {n!r}")
    n = int(n)

    if domain.kind == INT:
        convert = lambda v: _as_int(v, domain.m)  # noqa: E731
    elif domain.kind == REAL:
        convert = _as_real
    else:
        convert = lambda v: _as_vec(v, domain.d)  # noqa: E731

    values: dict[tuple[int, int], object] = {}
    for key, value in entries.items():
        try:
            i, j = key
        except (TypeError, ValueError):
            raise GraphError(f"pair key {key!r} is not an (i, j) tuple") from None
        if not all(isinstance(k, (int, np.integer)) and 1 <= k <= n for k in (i, j)):
            raise GraphError(f"pair {key!r} out of range 1..{n}")
        pair = (min(i, j), max(i, j))
        v = convert(value)
        if pair in values and values[pair] != v:
            raise GraphError(f"conflicting weights for pair {pair}")
        values[pair] = v

    fill = convert(default) if default is not None else None
    shape = (n, n, domain.d) if domain.kind == VEC else (n, n)
    w = np.zeros(shape, dtype=np.int64 if domain.exact else np.float64)
    missing = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            v = values.get((i, j), fill)
            if v is None:
                missing.append((i, j))
                continue
            w[i - 1, j - 1] = v
            w[j - 1, i - 1] = v
    if missing:
        shown = ", ".join(map(str, missing[:5]))
        raise GraphError(f"missing weights for {len(missing)} pair(s): {shown}")
    return WeightedGraph(w, domain)


def edge_weight(G: WeightedGraph, i: int, j: int):
    return G.weight(i, j)


@dataclass(frozen=True)
class NodePermutation:
    """Bijection of ``{1..n}``; ``images[i - 1]`` is the image of node ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise GraphError(f"{self.images!r} is not a permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "NodePermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, arr) -> "NodePermutation":
        return cls(tuple(int(x) + 1 for x in arr))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "NodePermutation":
        return cls.from_zero_based(rng.permutation(n))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.intp) - 1

    def compose(self, other: "NodePermutation") -> "NodePermutation":
        """``self ∘ other``: first ``other``, then ``self``."""
        if other.n != self.n:
            raise GraphError("cannot compose permutations of different sizes")
        return NodePermutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "NodePermutation":
        inv = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return NodePermutation(tuple(inv))


def apply_permutation(G: WeightedGraph, pi: NodePermutation) -> WeightedGraph:
    """Relabel nodes: the result ``H`` has ``H[i, j] = G[pi(i), pi(j)]``.

    Consequently ``apply_permutation(apply_permutation(G, s), p)`` equals
    ``apply_permutation(G, s.compose(p))``.
    """
    if pi.n != G.n:
        raise GraphError(f"permutation of size {pi.n} applied to a graph with {G.n} nodes")
    p = pi.zero_based()
    return WeightedGraph(G.matrix[np.ix_(p, p)], G.domain)


@dataclass(frozen=True)
class CanonicalForm:
    """Serialized lexicographically minimal lower-triangle weight sequence."""

    code: bytes

    def hex(self) -> str:
        return self.code.hex()


def _twin_representatives(W: list[list[int]]) -> list[int]:
    # u, v are twins when swapping them is an automorphism; twin-ness is an
    # equivalence relation, so each class is represented by its smallest member.
    n = len(W)
    rep = list(range(n))
    for v in range(n):
        for u in range(v):
            if rep[u] != u:
                continue
            if W[u][u] == W[v][v] and all(W[u][x] == W[v][x] for x in range(n) if x != u and x != v):
                rep[v] = u
                break
    return rep


def _canonical_order(W: list[list[int]]) -> tuple[list[int], list[tuple[int, ...]]]:
    """Return (vertex order, block sequence) minimizing the sequence of rows
    ``(W[v_k][v_0], ..., W[v_k][v_k])`` lexicographically."""
    n = len(W)
    rep = _twin_representatives(W)
    best: list = [None, None]
    order: list[int] = []
    blocks: list[tuple[int, ...]] = []
    used = [False] * n

    def rec(level):
        if level == n:
            if best[0] is None or blocks < best[0]:
                best[0] = list(blocks)
                best[1] = list(order)
            return
        cands = []
        seen = set()
        for v in range(n):
            if used[v] or rep[v] in seen:
                continue
            seen.add(rep[v])
            row = W[v]
            cands.append((tuple(row[u] for u in order) + (row[v],), v))
        low = min(c[0] for c in cands)
        if best[0] is not None and blocks + [low] > best[0][: level + 1]:
            return
        for block, v in cands:
            if block != low:
                continue
            used[v] = True
            order.append(v)
            blocks.append(block)
            rec(level + 1)
            blocks.pop()
            order.pop()
            used[v] = False

    rec(0)
    return best[1], best[0]


def canonical_form(G: WeightedGraph, max_nodes: int = DEFAULT_CANONICAL_CAP) -> CanonicalForm:
    """Exact canonical form by branch-and-bound over node orderings.

    Only integer-domain graphs are accepted: minimizing over rounded reals is
    not well defined.
    """
    if not G.domain.exact:
        raise DomainError("canonical_form needs integer weights")
    if G.n > max_nodes:
        raise GraphError(f"canonical_form is capped at {max_nodes} nodes (got {G.n})")
    W = G.matrix.tolist()
    _, blocks = _canonical_order(W)
    flat = [x for block in blocks for x in block]
    header = f"{G.domain.m}:{G.n}:".encode()
    return CanonicalForm(header + np.asarray(flat, dtype=">i8").tobytes())


def _check_same_shape(G: WeightedGraph, H: WeightedGraph):
    if G.n != H.n:
        raise GraphError(f"node counts differ ({G.n} vs {H.n})")
    if G.domain != H.domain:
        raise GraphError(f"domains differ ({G.domain} vs {H.domain})")


def _close(a, b, tol):
    if tol == 0:
        return np.array_equal(a, b)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return bool(np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))


def find_isomorphism(G: WeightedGraph, H: WeightedGraph, tol: float = 0.0) -> NodePermutation | None:
    """Backtracking search for ``pi`` with ``apply_permutation(G, pi) == H``.

    With ``tol > 0`` weights are compared with relative tolerance ``tol``.
    """
    _check_same_shape(G, H)
    n = G.n
    g, h = G.matrix, H.matrix

    if tol == 0:
        def signature(w, v):
            row = [w[v, x].tobytes() for x in range(n) if x != v]
            return (w[v, v].tobytes(), tuple(sorted(row)))

        sig_g = [signature(g, v) for v in range(n)]
        sig_h = [signature(h, v) for v in range(n)]
        if sorted(sig_g) != sorted(sig_h):
            return None
        cands = [[u for u in range(n) if sig_g[u] == sig_h[v]] for v in range(n)]
    else:
        cands = [list(range(n)) for _ in range(n)]

    order = sorted(range(n), key=lambda v: len(cands[v]))
    image = [-1] * n
    taken = [False] * n

    def rec(k):
        if k == n:
            return True
        v = order[k]
        for u in cands[v]:
            if taken[u] or not _close(h[v, v], g[u, u], tol):
                continue
            if all(_close(h[v, order[t]], g[u, image[order[t]]], tol) for t in range(k)):
                image[v] = u
                taken[u] = True
                if rec(k + 1):
                    return True
                taken[u] = False
        image[v] = -1
        return False

    if not rec(0):
        return None
    return NodePermutation.from_zero_based(image)


def are_isomorphic(G: WeightedGraph, H: WeightedGraph, tol: float = 0.0) -> bool:
    """True iff some ``pi`` has ``H[i, j] = G[pi(i), pi(j)]`` for all ``i, j``."""
    _check_same_shape(G, H)
    if G.domain.exact and G.n <= DEFAULT_CANONICAL_CAP:
        return canonical_form(G) == canonical_form(H)
    return find_isomorphism(G, H, tol) is not None


def all_permutations(n: int) -> Iterator[NodePermutation]:
    for p in itertools.permutations(range(1, n + 1)):
        yield NodePermutation(p)
