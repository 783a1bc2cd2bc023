"""Randomized checks of the reconstruction theorems for real weights.

Each trial draws a random graph, confirms the genericity hypothesis, and
checks that the theorem's distributions are unchanged by relabelling and
changed by perturbing a single weight.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NotApplicableError
from .genericity import (
    check_generic_combined,
    check_generic_edge,
    check_generic_node,
    check_generic_vector_edge,
)
from .graph import Domain, NodePermutation, WeightedGraph, apply_permutation
from .invariants import theorem_distributions

KINDS = ("edge", "vector-edge", "node", "combined")


def random_real_graph(n: int, d1: int = 1, d2: int = 0, seed=0) -> WeightedGraph:
    """Edge components ``1..d1`` and node components ``1..d2`` uniform on [0, 1).

    Components beyond ``d1`` (off the diagonal) or ``d2`` (on it) stay zero.
    The graph is scalar when ``max(d1, d2) <= 1``. ``seed`` may be anything
    ``numpy.random.default_rng`` accepts.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if d1 < 0 or d2 < 0:
        raise ValueError("dimensions must be non-negative")
    rng = np.random.default_rng(seed)
    d = max(d1, d2, 1)
    W = np.zeros((n, n, d))
    iu = np.triu_indices(n, k=1)
    if d1:
        vals = rng.random((len(iu[0]), d1))
        W[iu[0], iu[1], :d1] = vals
        W[iu[1], iu[0], :d1] = vals
    if d2:
        idx = np.arange(n)
        W[idx, idx, :d2] = rng.random((n, d2))
    if d == 1:
        return WeightedGraph.from_matrix(W[:, :, 0], Domain.real())
    return WeightedGraph.from_matrix(W, Domain.vector(d))


def _dims(kind: str, d: int) -> tuple[int, int]:
    return {"edge": (1, 0), "vector-edge": (d, 0), "node": (0, d), "combined": (d, d)}[kind]


def _check(G: WeightedGraph, kind: str, d1: int, d2: int):
    if kind == "edge":
        return check_generic_edge(G)
    if kind == "vector-edge":
        return check_generic_vector_edge(G)
    if kind == "node":
        return check_generic_node(G)
    return check_generic_combined(G, edge_dim=d1, node_dim=d2)


def _distributions(G: WeightedGraph, kind: str, d1: int, d2: int):
    return theorem_distributions(G, kind, edge_dim=d1, node_dim=d2)


def _perturb(G: WeightedGraph, d1: int, d2: int, rng: np.random.Generator) -> WeightedGraph:
    """Add a random non-zero amount to one active weight (both symmetric cells)."""
    n = G.n
    cells = [(i, j, l) for i in range(n) for j in range(i + 1, n) for l in range(d1)]
    cells += [(i, i, l) for i in range(n) for l in range(d2)]
    i, j, l = cells[rng.integers(len(cells))]
    W = G.matrix.copy()
    delta = rng.uniform(0.01, 1.0)
    if W.ndim == 3:
        W[i, j, l] += delta
        if i != j:
            W[j, i, l] += delta
    else:
        W[i, j] += delta
        if i != j:
            W[j, i] += delta
    return WeightedGraph.from_matrix(W, G.domain)


@dataclass
class ExperimentReport:
    n: int
    kind: str
    dim: int
    trials: int
    seed: int
    generic: int = 0
    permutation_equal: int = 0
    perturbation_distinct: int = 0
    failures: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.generic == self.permutation_equal == self.perturbation_distinct == self.trials

    def to_text(self) -> str:
        return (
            f"n={self.n} kind={self.kind} d={self.dim} trials={self.trials} seed={self.seed} "
            f"generic={self.generic} permutation_equal={self.permutation_equal} "
            f"perturbation_distinct={self.perturbation_distinct}"
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)


def run_distribution_experiment(
    n: int, trials: int, seed: int, kind: str = "edge", d: int = 2
) -> ExperimentReport:
    """Run ``trials`` independent trials; failures are recorded, not raised.

    ``d`` is the weight dimension for ``vector-edge`` and ``node`` and the
    common edge/node dimension for ``combined``; ``edge`` ignores it.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")
    if n < 5:
        raise NotApplicableError(f"the distribution experiment needs n >= 5 (got n = {n})")
    if kind == "node" and d < 2:
        raise ValueError("the node experiment needs d >= 2")
    d1, d2 = _dims(kind, d)
    report = ExperimentReport(n, kind, 1 if kind == "edge" else d, trials, seed)
    for t, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        graph_seed, aux_seed = child.spawn(2)
        rng = np.random.default_rng(aux_seed)
        G = random_real_graph(n, d1, d2, graph_seed)
        if _check(G, kind, d1, d2).satisfied:
            report.generic += 1
        else:
            report.failures.append([t, "generic"])
        base = _distributions(G, kind, d1, d2)
        H = apply_permutation(G, NodePermutation.random(n, rng))
        if _distributions(H, kind, d1, d2) == base:
            report.permutation_equal += 1
        else:
            report.failures.append([t, "permutation"])
        P = _perturb(G, d1, d2, rng)
        if _distributions(P, kind, d1, d2) != base:
            report.perturbation_distinct += 1
        else:
            report.failures.append([t, "perturbation"])
    return report
