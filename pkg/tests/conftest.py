import re
from collections import defaultdict

import numpy as np
import pytest

from subtriangle.graph import Domain, WeightedGraph
from subtriangle.io import load_bundled


@pytest.fixture(scope="session")
def fig1_left():
    return load_bundled("fig1_left")


@pytest.fixture(scope="session")
def fig1_right():
    return load_bundled("fig1_right")


@pytest.fixture(scope="session")
def fig2():
    return load_bundled("fig2")


def int_graph(matrix, m):
    return WeightedGraph.from_matrix(np.asarray(matrix, dtype=np.int64), Domain.integer(m))


def random_int_graph(rng, n, m, node_weights=False):
    W = rng.integers(0, m, size=(n, n))
    W = np.triu(W, 1)
    W = W + W.T
    if node_weights:
        W[np.arange(n), np.arange(n)] = rng.integers(0, m, size=n)
    return int_graph(W, m)


# One summary line per acceptance criterion. A criterion passes when every
# test tagged with its number passes.
_AC_RESULTS = defaultdict(list)
_AC_NAME = re.compile(r"test_ac(\d+)_")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _AC_NAME.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _AC_RESULTS[int(m.group(1))].append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for ac in sorted(_AC_RESULTS):
        results = _AC_RESULTS[ac]
        failed = [name for name, outcome in results if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(results) - len(failed)}/{len(results)} checks"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        terminalreporter.write_line(f"AC{ac:<2} {status}  {detail}")
