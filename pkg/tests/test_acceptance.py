"""Acceptance criteria, one test group per criterion.

Tests are named ``test_acNN_*``; conftest prints one PASS/FAIL line per
criterion number at the end of the run.
"""

import itertools
import time
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
import pytest

from subtriangle import _batch
from subtriangle.census import CensusConfig, merge_partial, run_census, run_partials, universe_size
from subtriangle.experiment import run_distribution_experiment
from subtriangle.graph import NodePermutation, apply_permutation, are_isomorphic
from subtriangle.invariants import (
    Multiset,
    adjacent_sum_distribution,
    characteristic_polynomial,
    triangle_code,
    triangle_distribution,
)
from subtriangle.io import load_bundled
from subtriangle.pairperm import lemma31_census
from subtriangle.reconstruct import check_corollary_distinct, check_triangle_theorem, reconstruct_mapping

from conftest import int_graph, random_int_graph

COLUMNS = ("non_reconst", "perr_triangle", "perr_spectrum", "perr_combined")

# Printed table rows at desk scale: (n, m) -> column values.
PRINTED = {
    (4, 2): (0, 0, 0, 0),
    (4, 3): (0, 0, 0, 0),
    (4, 4): (0, 0, 0, 0),
    (4, 5): (0, 0, 3.56e-4, 0),
    (4, 6): (0, 0, 0, 0),
    (5, 2): (0.15, 3.45e-3, 1.44e-4, 0),
    (5, 3): (0.15, 2.83e-4, 3.85e-5, 2.30e-6),
    (5, 4): (0.078, 1.28e-5, 3.20e-6, 0),
}
REL_TOL = 0.01


@lru_cache(maxsize=None)
def census(n, m, surjective):
    return run_census(CensusConfig(n, m, surjective))


def column_value(report, column):
    if column == "non_reconst":
        return report.nonreconstructible_ratio
    return report.perr[column.removeprefix("perr_")]


def matches(value: Fraction, printed: float) -> bool:
    if printed == 0:
        return value == 0
    return abs(float(value) - printed) <= REL_TOL * printed


# 1 ----------------------------------------------------------------------

def test_ac01_fig1_counterexample():
    start = time.perf_counter()
    G, H = load_bundled("fig1_left"), load_bundled("fig1_right")
    assert G.n == H.n == 5
    assert triangle_code(G) == triangle_code(H)
    T = triangle_distribution(G)
    assert T == triangle_distribution(H)
    by_nonzero = Counter()
    for tri, c in T.items():
        by_nonzero[sum(1 for g in tri.edge_weights() if g != 0)] += c
    assert [by_nonzero[k] for k in range(4)] == [2, 4, 4, 0]
    assert not are_isomorphic(G, H)
    assert time.perf_counter() - start < 1.0


# 2 ----------------------------------------------------------------------

def test_ac02_exact_anchor():
    start = time.perf_counter()
    r = census(6, 2, False)
    assert r.universe_size == 32768
    assert r.pair_counts["triangle"] == 7680960
    assert r.perr["triangle"] == Fraction(7680960, 2**30)
    assert r.csv_row()["perr_triangle"] == "7.15e-03"
    assert time.perf_counter() - start < 300


# 3 ----------------------------------------------------------------------

@pytest.mark.parametrize("row", sorted(PRINTED), ids=lambda r: f"n{r[0]}m{r[1]}")
@pytest.mark.parametrize("column", COLUMNS)
def test_ac03_table_rows(row, column):
    n, m = row
    printed = PRINTED[row][COLUMNS.index(column)]
    found = {}
    for surjective in (False, True):
        value = column_value(census(n, m, surjective), column)
        found["surjective" if surjective else "all"] = float(value)
        if matches(value, printed):
            return
    pytest.fail(f"{column} at n={n}, m={m}: printed {printed}, computed {found}")


# 4 ----------------------------------------------------------------------

def test_ac04_theorem_not_corollary():
    start = time.perf_counter()
    G = load_bundled("fig2")
    assert check_triangle_theorem(G).satisfied
    assert not check_corollary_distinct(G).satisfied
    assert time.perf_counter() - start < 1.0


# 5 ----------------------------------------------------------------------

def test_ac05_theorem_soundness_n5_m3():
    start = time.perf_counter()
    (part,) = run_partials(CensusConfig(5, 3, invariants=("triangle",)))
    assert part.count == 3**10 == 59049
    class_size = {}
    for bucket in part.classes["triangle"].values():
        for canon in bucket:
            class_size[canon] = len(bucket)
    digits = _batch.digits_from_indices(np.arange(3**10), 5, 3)
    canon = _batch.canonical_codes(digits, 5, 3)
    mats = _batch.to_matrices(digits, 5)
    passing = 0
    for A, c in zip(mats, canon.tolist()):
        if check_triangle_theorem(int_graph(A, 3)).satisfied:
            passing += 1
            assert class_size[c] == 1
    assert passing > 0
    assert time.perf_counter() - start < 120


# 6 ----------------------------------------------------------------------

def test_ac06_constructive_recovery():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    recovered = 0
    for t in range(500):
        n = (5, 6, 7)[t % 3]
        G = random_int_graph(rng, n, 50)
        while not check_corollary_distinct(G).satisfied:
            G = random_int_graph(rng, n, 50)
        pi0 = NodePermutation.random(n, rng)
        H = apply_permutation(G, pi0)
        pi = reconstruct_mapping(G, H)
        if pi is not None and all(
            G.weight(i, j) == H.weight(pi(i), pi(j)) for i, j in itertools.product(range(1, n + 1), repeat=2)
        ):
            recovered += 1
    assert recovered == 500
    assert time.perf_counter() - start < 30


# 7 ----------------------------------------------------------------------

def test_ac07_pair_permutations_n5():
    start = time.perf_counter()
    result = lemma31_census(5)
    assert result.total == 3628800
    assert result.induced == 120
    assert result.property_holders == 120
    assert result.decomposable == 120
    assert result.agree
    assert time.perf_counter() - start < 600


# 8 ----------------------------------------------------------------------

@pytest.mark.parametrize("kind,trials", [("edge", 1000), ("vector-edge", 200), ("node", 200), ("combined", 200)])
def test_ac08_genericity_and_faithfulness(kind, trials):
    start = time.perf_counter()
    rep = run_distribution_experiment(5, trials, seed=7, kind=kind, d=2)
    assert rep.generic == trials, rep.failures[:5]
    assert rep.permutation_equal == trials, rep.failures[:5]
    assert rep.perturbation_distinct == trials, rep.failures[:5]
    assert time.perf_counter() - start < 60


# 9 ----------------------------------------------------------------------

def _multiplicity_ok(G):
    n = G.n
    T = triangle_distribution(G)
    nodes = Counter(G.node_weight(i) for i in range(1, n + 1))
    edges = Counter(G.weight(i, j) for i, j in itertools.combinations(range(1, n + 1), 2))
    return (
        T.total() == comb(n, 3)
        and T.edge_weight_multiset() == Multiset.from_counts({w: (n - 2) * c for w, c in edges.items()})
        and T.node_weight_multiset() == Multiset.from_counts({w: comb(n - 1, 2) * c for w, c in nodes.items()})
    )


def test_ac09_multiplicities_exhaustive():
    digits = _batch.digits_from_indices(np.arange(2**10), 5, 2)
    for A in _batch.to_matrices(digits, 5):
        assert _multiplicity_ok(int_graph(A, 2))


def test_ac09_multiplicities_random():
    rng = np.random.default_rng(99)
    for n in range(3, 10):
        for _ in range(20):
            assert _multiplicity_ok(random_int_graph(rng, n, 5, node_weights=True))


def test_ac09_dalpha_length():
    rng = np.random.default_rng(3)
    for n in range(3, 10):
        G = random_int_graph(rng, n, 4)
        assert len(adjacent_sum_distribution(G)) == n * comb(n - 1, 2)


def test_ac09_charpoly_trace():
    rng = np.random.default_rng(4)
    for n in range(1, 10):
        for _ in range(20):
            G = random_int_graph(rng, n, 7, node_weights=True)
            p = characteristic_polynomial(G)
            assert p.coefficients[-1] == 1
            assert p.coefficients[-2] == -int(np.trace(G.matrix))


@pytest.mark.parametrize("n,m,surjective", [(4, 4, False), (5, 2, False), (5, 3, True), (6, 2, False)])
def test_ac09_census_conservation_monotonicity(n, m, surjective):
    (part,) = run_partials(CensusConfig(n, m, surjective))
    size = universe_size(n, m, surjective)
    for classes in part.classes.values():
        assert sum(sum(b.values()) for b in classes.values()) == size
    r = merge_partial([part])
    assert r.pair_counts["combined"] <= min(r.pair_counts["triangle"], r.pair_counts["spectrum"])
    for inv, p in r.perr.items():
        assert p * size**2 == r.pair_counts[inv]


# 10 ---------------------------------------------------------------------

@pytest.mark.parametrize("n,m,surjective", [(5, 3, True), (6, 2, False)])
def test_ac10_census_worker_determinism(n, m, surjective):
    a = run_census(CensusConfig(n, m, surjective, workers=1))
    b = run_census(CensusConfig(n, m, surjective, workers=4))
    assert a.to_json() == b.to_json()
    assert a.to_csv() == b.to_csv()


def test_ac10_experiment_determinism():
    for kind in ("edge", "combined"):
        a = run_distribution_experiment(6, 30, seed=123, kind=kind)
        b = run_distribution_experiment(6, 30, seed=123, kind=kind)
        assert a.to_json() == b.to_json()
