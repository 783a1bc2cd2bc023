"""Exhaustive censuses over integer-weighted complete graphs.

Every graph on ``n`` nodes with off-diagonal weights in ``0..m-1`` (node
weights zero) is grouped by its triangle fingerprint, its characteristic
polynomial and the pair of both. Within each fingerprint class graphs are
split by isomorphism class, which yields exact counts of graphs that share a
fingerprint with a non-isomorphic graph and of ordered non-isomorphic pairs
that share a fingerprint.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _batch
from .errors import BudgetError
from .graph import Domain, WeightedGraph

INVARIANTS = ("triangle", "spectrum", "combined")
DEFAULT_BUDGET = 2**26
DEFAULT_MAX_NODES = 6
DEFAULT_CHUNK = 1 << 15


class CensusError(ValueError):
    """Partial states that cannot be merged into a valid report."""


def pair_count(n: int) -> int:
    return math.comb(n, 2)


def surjective_count(P: int, m: int) -> int:
    """Assignments of ``P`` slots onto all of ``m`` values."""
    return sum((-1) ** k * math.comb(m, k) * (m - k) ** P for k in range(m + 1))


def universe_size(n: int, m: int, surjective: bool) -> int:
    P = pair_count(n)
    return surjective_count(P, m) if surjective else m**P


def check_budget(n: int, m: int, budget: int = DEFAULT_BUDGET, override: bool = False) -> int:
    """Return the odometer range ``m**C(n,2)``; raise ``BudgetError`` if it is
    too large (or ``n`` exceeds the default node cap) without an override."""
    total = m ** pair_count(n)
    if not override and (total > budget or n > DEFAULT_MAX_NODES):
        raise BudgetError(
            f"census n={n}, m={m} enumerates {total} graphs "
            f"(budget {budget}, node cap {DEFAULT_MAX_NODES}); pass an override to run it",
            estimated_size=total,
        )
    return total


def enumerate_digits(n: int, m: int, surjective: bool, start: int = 0, stop: int | None = None,
                     chunk: int = DEFAULT_CHUNK):
    """Yield ``(N, C(n,2))`` digit blocks for odometer indices in ``[start, stop)``."""
    stop = m ** pair_count(n) if stop is None else stop
    for lo in range(start, stop, chunk):
        d = _batch.digits_from_indices(np.arange(lo, min(lo + chunk, stop), dtype=np.int64), n, m)
        if surjective:
            d = d[_batch.surjective_mask(d, m)]
        if len(d):
            yield d


def enumerate_graphs(n: int, m: int, surjective: bool = False, budget: int = DEFAULT_BUDGET,
                     budget_override: bool = False):
    """Yield every graph of the universe in odometer order over pairs sorted by
    ``(i, j)``: the first pair varies slowest. Node weights are zero."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    check_budget(n, m, budget, budget_override)
    domain = Domain.integer(m)
    for block in enumerate_digits(n, m, surjective):
        for A in _batch.to_matrices(block, n):
            yield WeightedGraph.from_matrix(A, domain)


@dataclass(frozen=True)
class CensusConfig:
    n: int
    m: int
    surjective: bool = False
    invariants: tuple = INVARIANTS
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    budget_override: bool = False
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"census needs n >= 3 (got {self.n})")
        if self.m < 2:
            raise ValueError(f"census needs m >= 2 (got {self.m})")
        bad = set(self.invariants) - set(INVARIANTS)
        if bad or not self.invariants:
            raise ValueError(f"invariants must be a non-empty subset of {INVARIANTS}")
        object.__setattr__(self, "invariants", tuple(i for i in INVARIANTS if i in self.invariants))
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def mode(self) -> str:
        return "surjective" if self.surjective else "all"

    def signature(self) -> tuple:
        """The fields that determine the result (not how it is computed)."""
        return (self.n, self.m, self.surjective, self.invariants)


@dataclass
class PartialCensus:
    """Class maps of one slice of the universe.

    ``classes[inv]`` maps a fingerprint key to a Counter of canonical codes.
    """

    signature: tuple
    count: int
    classes: dict

    def to_report(self, runtime: dict | None = None) -> "CensusReport":
        return merge_partial([self], runtime=runtime)


def _spectrum_keys(blocks: np.ndarray) -> list:
    if blocks.dtype == object:
        return [repr(tuple(int(c) for c in row)).encode() for row in blocks]
    return [row.tobytes() for row in blocks]


def census_slice(config: CensusConfig, start: int, stop: int) -> PartialCensus:
    """Class maps for odometer indices ``[start, stop)``."""
    n, m = config.n, config.m
    want_spec = "spectrum" in config.invariants or "combined" in config.invariants
    classes = {inv: {} for inv in ("triangle", *config.invariants) if inv}
    count = 0
    for d in enumerate_digits(n, m, config.surjective, start, stop, config.chunk):
        count += len(d)
        canon = _batch.canonical_codes(d, n, m)
        fids = {}
        rows, tid = np.unique(_batch.triangle_rows(d, n, m), axis=0, return_inverse=True)
        tkeys = [r.tobytes() for r in rows]
        fids["triangle"] = (tid.ravel(), tkeys)
        if want_spec:
            polys = _batch.charpolys(_batch.to_matrices(d, n))
            if polys.dtype == object:
                skeys_all = _spectrum_keys(polys)
                uniq = sorted(set(skeys_all))
                pos = {k: i for i, k in enumerate(uniq)}
                sid = np.array([pos[k] for k in skeys_all], dtype=np.int64)
                skeys = uniq
            else:
                srows, sid = np.unique(polys, axis=0, return_inverse=True)
                sid = sid.ravel()
                skeys = _spectrum_keys(srows)
            fids["spectrum"] = (sid, skeys)
            cid = fids["triangle"][0] * len(skeys) + sid
            ckeys = {
                int(c): tkeys[int(c) // len(skeys)] + b"|" + skeys[int(c) % len(skeys)]
                for c in np.unique(cid)
            }
            fids["combined"] = (cid, ckeys)
        for inv, maps in classes.items():
            ids, keys = fids[inv]
            pairs, counts = np.unique(np.stack([ids, canon], axis=1), axis=0, return_counts=True)
            for (f, c), k in zip(pairs.tolist(), counts.tolist()):
                bucket = maps.setdefault(keys[f], Counter())
                bucket[c] += k
    return PartialCensus(config.signature(), count, classes)


def _slices(config: CensusConfig, total: int, parts: int):
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _slice_job(args):
    config, lo, hi = args
    return census_slice(config, lo, hi)


def run_partials(config: CensusConfig, parts: int | None = None) -> list[PartialCensus]:
    total = check_budget(config.n, config.m, config.budget, config.budget_override)
    parts = config.workers if parts is None else parts
    jobs = [(config, lo, hi) for lo, hi in _slices(config, total, max(1, parts))]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_slice_job, jobs))
    return [_slice_job(j) for j in jobs]


def run_census(config: CensusConfig) -> "CensusReport":
    """Enumerate the universe (split across ``config.workers`` processes) and
    summarize it. The report does not depend on the worker count."""
    t0 = time.perf_counter()
    partials = run_partials(config)
    return merge_partial(
        partials, runtime={"seconds": time.perf_counter() - t0, "workers": config.workers}
    )


def _merge_maps(target: dict, source: dict):
    for key, bucket in source.items():
        if key in target:
            target[key].update(bucket)
        else:
            target[key] = Counter(bucket)


def _pair_count(classes: dict) -> int:
    total = 0
    for bucket in classes.values():
        size = sum(bucket.values())
        total += size * size - sum(c * c for c in bucket.values())
    return total


def _check_closure(inv: str, classes: dict):
    """Each isomorphism class must lie in a single fingerprint class."""
    seen = {}
    for key, bucket in classes.items():
        for canon in bucket:
            if seen.setdefault(canon, key) != key:
                raise CensusError(f"isomorphism class {canon} splits across {inv} classes")


def merge_partial(partials: list, runtime: dict | None = None) -> "CensusReport":
    """Union of disjoint slices of one universe; identical to a single run."""
    if not partials:
        raise CensusError("nothing to merge")
    signature = partials[0].signature
    if any(p.signature != signature for p in partials):
        raise CensusError("partial states come from different configurations")
    n, m, surjective, invariants = signature
    merged: dict = {}
    count = 0
    for p in partials:
        count += p.count
        for inv, maps in p.classes.items():
            _merge_maps(merged.setdefault(inv, {}), maps)
    size = universe_size(n, m, surjective)
    if count != size:
        raise CensusError(f"partial states cover {count} graphs, universe has {size}")
    for inv, maps in merged.items():
        if sum(sum(b.values()) for b in maps.values()) != size:
            raise CensusError(f"{inv} class sizes do not sum to the universe size")
        _check_closure(inv, maps)
    tri = merged["triangle"]
    nonrec = sum(sum(b.values()) for b in tri.values() if len(b) >= 2)
    iso_classes = len({c for b in tri.values() for c in b})
    report = CensusReport(
        n=n,
        m=m,
        surjective=surjective,
        universe_size=size,
        iso_class_count=iso_classes,
        class_counts={inv: len(merged[inv]) for inv in invariants},
        nonreconstructible_count=nonrec,
        pair_counts={inv: _pair_count(merged[inv]) for inv in invariants},
        runtime=runtime or {},
    )
    report.validate()
    return report


def sci(x: Fraction) -> str:
    """Three significant digits, e.g. ``7.15e-03``; exact zero prints as ``0``."""
    return "0" if x == 0 else f"{float(x):.2e}"


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


CSV_COLUMNS = (
    "nodes", "weights", "non_reconst", "perr_triangle", "perr_spectrum", "perr_combined",
    "mode", "universe_size", "iso_classes", "nonreconst_count",
    "pairs_triangle", "pairs_spectrum", "pairs_combined",
    "non_reconst_exact", "perr_triangle_exact", "perr_spectrum_exact", "perr_combined_exact",
)


@dataclass
class CensusReport:
    n: int
    m: int
    surjective: bool
    universe_size: int
    iso_class_count: int
    class_counts: dict
    nonreconstructible_count: int
    pair_counts: dict
    runtime: dict = field(default_factory=dict, compare=False)

    @property
    def mode(self) -> str:
        return "surjective" if self.surjective else "all"

    @property
    def nonreconstructible_ratio(self) -> Fraction:
        return Fraction(self.nonreconstructible_count, self.universe_size)

    @property
    def perr(self) -> dict:
        return {k: Fraction(v, self.universe_size**2) for k, v in self.pair_counts.items()}

    def validate(self):
        p = self.pair_counts
        if "combined" in p:
            for other in ("triangle", "spectrum"):
                if other in p and p["combined"] > p[other]:
                    raise CensusError(f"combined pair count exceeds the {other} count")
        for v in (self.nonreconstructible_ratio, *self.perr.values()):
            if not 0 <= v <= 1:
                raise CensusError("ratio outside [0, 1]")

    def to_dict(self) -> dict:
        """Everything except runtime metadata, so equal censuses serialize identically."""
        return {
            "nodes": self.n,
            "weights": self.m,
            "mode": self.mode,
            "universe_size": self.universe_size,
            "iso_classes": self.iso_class_count,
            "class_counts": dict(self.class_counts),
            "nonreconstructible": {
                "count": self.nonreconstructible_count,
                "ratio": frac(self.nonreconstructible_ratio),
                "ratio_sci": sci(self.nonreconstructible_ratio),
            },
            "pair_counts": dict(self.pair_counts),
            "perr": {k: frac(v) for k, v in self.perr.items()},
            "perr_sci": {k: sci(v) for k, v in self.perr.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def csv_row(self) -> dict:
        perr = self.perr
        row = {
            "nodes": self.n,
            "weights": self.m,
            "non_reconst": sci(self.nonreconstructible_ratio),
            "mode": self.mode,
            "universe_size": self.universe_size,
            "iso_classes": self.iso_class_count,
            "nonreconst_count": self.nonreconstructible_count,
            "non_reconst_exact": frac(self.nonreconstructible_ratio),
        }
        for inv in INVARIANTS:
            row[f"perr_{inv}"] = sci(perr[inv]) if inv in perr else ""
            row[f"pairs_{inv}"] = self.pair_counts.get(inv, "")
            row[f"perr_{inv}_exact"] = frac(perr[inv]) if inv in perr else ""
        return row

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if header:
            writer.writeheader()
        writer.writerow(self.csv_row())
        return buf.getvalue()
