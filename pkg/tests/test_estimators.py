import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from subtriangle.estimators import (
    DistributionFingerprinter,
    SpectrumFingerprinter,
    TriangleFingerprinter,
)
from subtriangle.experiment import random_real_graph
from subtriangle.graph import NodePermutation, apply_permutation

from conftest import random_int_graph


def test_params_and_clone():
    t = TriangleFingerprinter(r=7)
    assert t.get_params() == {"r": 7}
    assert clone(t).r == 7
    d = DistributionFingerprinter(family="combined", edge_dim=2, node_dim=1)
    assert clone(d).get_params() == {"family": "combined", "edge_dim": 2, "node_dim": 1}


def test_fig1_rows(fig1_left, fig1_right):
    tri = TriangleFingerprinter().fit_transform([fig1_left, fig1_right])
    assert tri.shape == (2, 10)
    assert np.array_equal(tri[0], tri[1])
    spec = SpectrumFingerprinter().fit_transform([fig1_left, fig1_right])
    assert spec.shape == (2, 6)
    assert not np.array_equal(spec[0], spec[1])


def test_isomorphic_rows_equal():
    rng = np.random.default_rng(0)
    for _ in range(10):
        G = random_int_graph(rng, 6, 4)
        H = apply_permutation(G, NodePermutation.random(6, rng))
        for est in (TriangleFingerprinter(), SpectrumFingerprinter(), DistributionFingerprinter()):
            X = est.fit_transform([G, H])
            assert np.array_equal(X[0], X[1])


def test_real_distribution_rows():
    G = random_real_graph(5, seed=1)
    H = apply_permutation(G, NodePermutation((2, 3, 1, 5, 4)))
    X = DistributionFingerprinter().fit_transform([G, H, random_real_graph(5, seed=2)])
    assert np.allclose(X[0], X[1]) and not np.allclose(X[0], X[2])


def test_pipeline():
    rng = np.random.default_rng(1)
    graphs = [random_int_graph(rng, 5, 3) for _ in range(4)]
    pipe = make_pipeline(SpectrumFingerprinter(), FunctionTransformer(lambda X: X.astype(float)))
    assert pipe.fit_transform(graphs).shape == (4, 6)


def test_validation(fig2):
    with pytest.raises(ValueError):
        TriangleFingerprinter().fit([])
    with pytest.raises(TypeError):
        TriangleFingerprinter().fit([np.zeros((3, 3))])
    est = SpectrumFingerprinter().fit([fig2])
    rng = np.random.default_rng(2)
    with pytest.raises(ValueError):
        est.transform([random_int_graph(rng, 4, 2)])
