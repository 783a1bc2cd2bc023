import csv
import io
import itertools
import json
from collections import Counter, defaultdict
from fractions import Fraction

import numpy as np
import pytest

from subtriangle import _batch
from subtriangle.census import (
    CSV_COLUMNS,
    CensusConfig,
    CensusError,
    PartialCensus,
    census_slice,
    enumerate_graphs,
    merge_partial,
    run_census,
    run_partials,
    surjective_count,
    universe_size,
)
from subtriangle.errors import BudgetError
from subtriangle.graph import Domain, WeightedGraph, canonical_form
from subtriangle.invariants import characteristic_polynomial, triangle_code


def brute_census(n, m, surjective):
    """Census from the single-graph functions, with canonical_form as the
    isomorphism oracle."""
    tri, spec, comb = defaultdict(Counter), defaultdict(Counter), defaultdict(Counter)
    size = 0
    for G in enumerate_graphs(n, m, surjective):
        size += 1
        c = canonical_form(G)
        t, s = triangle_code(G, m), characteristic_polynomial(G).coefficients
        tri[t][c] += 1
        spec[s][c] += 1
        comb[(t, s)][c] += 1

    def pairs(classes):
        return sum(sum(b.values()) ** 2 - sum(v * v for v in b.values()) for b in classes.values())

    nonrec = sum(sum(b.values()) for b in tri.values() if len(b) > 1)
    return size, nonrec, {"triangle": pairs(tri), "spectrum": pairs(spec), "combined": pairs(comb)}


class TestEnumeration:
    def test_n6_m2(self):
        assert sum(len(b) for b in _iter_blocks(6, 2, False)) == 32768

    def test_n4_m2(self):
        graphs = list(enumerate_graphs(4, 2))
        assert len(graphs) == 64
        assert len(set(graphs)) == 64
        assert all(g.node_weight(i) == 0 for g in graphs for i in range(1, 5))

    def test_n3_surjective(self):
        graphs = list(enumerate_graphs(3, 2, surjective=True))
        assert len(graphs) == 6

    def test_odometer_order(self):
        graphs = list(enumerate_graphs(3, 3))
        # last pair (2, 3) varies fastest, first pair (1, 2) slowest
        assert [g.weight(2, 3) for g in graphs[:3]] == [0, 1, 2]
        assert graphs[1].weight(1, 2) == 0 and graphs[9].weight(1, 2) == 1

    def test_surjective_count(self):
        for P, m in [(3, 2), (6, 3), (10, 4), (5, 5)]:
            brute = sum(1 for t in itertools.product(range(m), repeat=P) if len(set(t)) == m)
            assert surjective_count(P, m) == brute
        assert universe_size(6, 2, False) == 2**15

    def test_budget(self):
        with pytest.raises(BudgetError) as exc:
            list(enumerate_graphs(8, 2))
        assert exc.value.estimated_size == 2**28
        with pytest.raises(BudgetError):
            run_census(CensusConfig(6, 4))
        with pytest.raises(BudgetError):
            run_census(CensusConfig(5, 3, budget=1000))


def _iter_blocks(n, m, surjective):
    from subtriangle.census import enumerate_digits

    return enumerate_digits(n, m, surjective)


class TestKernels:
    def test_digits_round_trip(self):
        idx = np.arange(0, 3**6, 7)
        d = _batch.digits_from_indices(idx, 4, 3)
        assert np.array_equal(d @ (3 ** np.arange(5, -1, -1)), idx)

    def test_against_scalar_functions(self):
        rng = np.random.default_rng(0)
        for n, m in [(4, 3), (5, 4), (6, 2), (7, 2)]:
            P = n * (n - 1) // 2
            d = rng.integers(0, m, size=(40, P))
            A = _batch.to_matrices(d, n)
            polys = _batch.charpolys(A)
            rows = _batch.triangle_rows(d, n, m)
            for t in range(40):
                G = WeightedGraph.from_matrix(A[t], Domain.integer(m))
                assert tuple(reversed([int(x) for x in polys[t]])) == characteristic_polynomial(G).coefficients
                assert _batch.row_to_code(rows[t], m) == triangle_code(G, m)

    def test_charpoly_object_fallback(self):
        A = np.array([[[0, 10**6, 0], [10**6, 0, 10**6], [0, 10**6, 7]]], dtype=np.int64)
        assert _batch.charpoly_bound(3, 10**6) >= 2**63
        polys = _batch.charpolys(A)
        assert polys.dtype == object
        G = WeightedGraph.from_matrix(A[0], Domain.integer(10**6 + 1))
        assert tuple(reversed(polys[0].tolist())) == characteristic_polynomial(G).coefficients

    def test_canonical_codes_are_isomorphism_classes(self):
        d = _batch.digits_from_indices(np.arange(3**6), 4, 3)
        codes = _batch.canonical_codes(d, 4, 3)
        forms = [canonical_form(WeightedGraph.from_matrix(a, Domain.integer(3)))
                 for a in _batch.to_matrices(d, 4)]
        assert len(set(zip(codes.tolist(), forms))) == len(set(forms)) == len(set(codes.tolist()))


class TestRunCensus:
    def test_n3_m2(self):
        r = run_census(CensusConfig(3, 2))
        assert r.universe_size == 8 and r.pair_counts["triangle"] == 0

    @pytest.mark.parametrize("m", [2, 3, 4, 6])
    def test_n4_zero(self, m):
        r = run_census(CensusConfig(4, m, surjective=True))
        assert r.nonreconstructible_count == 0
        assert all(v == 0 for v in r.pair_counts.values())

    def test_n4_all_mode_spectrum_collides(self):
        # cospectral non-isomorphic pairs exist once repeated weights are allowed
        r = run_census(CensusConfig(4, 3))
        assert r.pair_counts == {"triangle": 0, "spectrum": 60, "combined": 0}

    @pytest.mark.parametrize("n,m,surjective", [(4, 3, False), (4, 4, True), (5, 2, False), (5, 2, True)])
    def test_against_brute_force(self, n, m, surjective):
        r = run_census(CensusConfig(n, m, surjective))
        size, nonrec, pairs = brute_census(n, m, surjective)
        assert r.universe_size == size
        assert r.nonreconstructible_count == nonrec
        assert r.pair_counts == pairs

    def test_exact_arithmetic(self):
        r = run_census(CensusConfig(5, 3, True))
        for inv, p in r.perr.items():
            assert p * r.universe_size**2 == r.pair_counts[inv]
            assert isinstance(p, Fraction)

    def test_monotone_and_conserved(self):
        for n, m, s in [(5, 2, False), (5, 3, True), (6, 2, False)]:
            (part,) = run_partials(CensusConfig(n, m, s))
            size = universe_size(n, m, s)
            for inv, classes in part.classes.items():
                assert sum(sum(b.values()) for b in classes.values()) == size
            r = merge_partial([part])
            assert r.pair_counts["combined"] <= min(r.pair_counts["triangle"], r.pair_counts["spectrum"])

    def test_invariant_subset(self):
        r = run_census(CensusConfig(5, 2, invariants=("spectrum",)))
        assert set(r.pair_counts) == {"spectrum"}
        assert r.nonreconstructible_count == 150

    def test_nonreconstructible_same_against_full_universe(self):
        """Triangle classes keep the edge-weight multiset, so a surjective graph
        only ever shares its class with surjective graphs."""
        (full,) = run_partials(CensusConfig(5, 3))
        surj = merge_partial(run_partials(CensusConfig(5, 3, True)))
        d = _batch.digits_from_indices(np.arange(3**10), 5, 3)
        mask = _batch.surjective_mask(d, 3)
        canon = _batch.canonical_codes(d[mask], 5, 3)
        surj_canon = set(canon.tolist())
        count = 0
        for bucket in full.classes["triangle"].values():
            if len(bucket) > 1:
                count += sum(v for c, v in bucket.items() if c in surj_canon)
        assert count == surj.nonreconstructible_count

    def test_bad_config(self):
        with pytest.raises(ValueError):
            CensusConfig(2, 2)
        with pytest.raises(ValueError):
            CensusConfig(4, 1)
        with pytest.raises(ValueError):
            CensusConfig(4, 2, invariants=("colour",))
        with pytest.raises(ValueError):
            CensusConfig(4, 2, workers=0)


class TestMerge:
    def test_split_equals_single(self):
        config = CensusConfig(5, 2)
        single = run_census(config)
        parts = run_partials(config, parts=4)
        assert len(parts) == 4
        merged = merge_partial(parts)
        assert merged == single
        assert merged.to_json() == single.to_json()
        assert merge_partial(parts[::-1]).to_json() == single.to_json()

    def test_identity_merge(self):
        config = CensusConfig(4, 3)
        (part,) = run_partials(config)
        assert merge_partial([part]) == part.to_report()

    def test_missing_slice(self):
        parts = run_partials(CensusConfig(5, 2), parts=4)
        with pytest.raises(CensusError):
            merge_partial(parts[:3])

    def test_overlap(self):
        config = CensusConfig(4, 2)
        parts = run_partials(config, parts=2)
        with pytest.raises(CensusError):
            merge_partial(parts + [census_slice(config, 0, 5)])

    def test_config_mismatch(self):
        a = run_partials(CensusConfig(4, 2))
        b = run_partials(CensusConfig(4, 2, surjective=True))
        with pytest.raises(CensusError):
            merge_partial(a + b)
        with pytest.raises(CensusError):
            merge_partial([])

    def test_split_isomorphism_class_detected(self):
        part = PartialCensus((3, 2, False, ("triangle",)), 8, {"triangle": {b"a": Counter({0: 4}), b"b": Counter({0: 4})}})
        with pytest.raises(CensusError):
            merge_partial([part])


class TestReportFormat:
    def test_json_excludes_runtime(self):
        r = run_census(CensusConfig(4, 2))
        doc = json.loads(r.to_json())
        assert "runtime" not in doc and "seconds" not in r.to_json()
        assert r.runtime["workers"] == 1

    def test_csv(self):
        r = run_census(CensusConfig(6, 2))
        rows = list(csv.DictReader(io.StringIO(r.to_csv())))
        assert list(rows[0]) == list(CSV_COLUMNS)
        row = rows[0]
        assert row["perr_triangle"] == "7.15e-03"
        assert row["pairs_triangle"] == "7680960"
        assert Fraction(row["perr_triangle_exact"]) == Fraction(7680960, 2**30)
        assert row["mode"] == "all"

    def test_zero_row(self):
        row = run_census(CensusConfig(4, 3, surjective=True)).csv_row()
        assert [row[k] for k in ("non_reconst", "perr_triangle", "perr_spectrum", "perr_combined")] == ["0"] * 4
