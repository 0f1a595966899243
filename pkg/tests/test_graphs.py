"""Graph data model: measures, consistency, products, file format."""

import json
import math

import numpy as np
import pytest

import boxprod as bp


def test_k2_measures(k2):
    assert k2.edge_w.tolist() == [1.0]
    assert k2.pi.tolist() == [0.5, 0.5]


def test_k3_measures(k3):
    assert np.allclose(k3.edge_w, 1 / 3)
    assert np.allclose(k3.pi, 1 / 3)


def test_p3_measures(p3):
    assert np.allclose(p3.edge_w, [0.5, 0.5])
    assert p3.pi.tolist() == [0.25, 0.5, 0.25]


def test_weights_renormalized():
    g = bp.build_graph(2, [(0, 1, 7.5)])
    assert g.edge_w.tolist() == [1.0]


def test_rejects_self_loop():
    with pytest.raises(ValueError, match="self-loop"):
        bp.build_graph(3, [(0, 0, 1.0), (0, 1, 1.0), (1, 2, 1.0)])


def test_rejects_nonpositive_weight():
    with pytest.raises(ValueError, match="weight"):
        bp.build_graph(2, [(0, 1, 0.0)])


def test_rejects_duplicate_edge():
    with pytest.raises(ValueError, match="duplicate"):
        bp.build_graph(2, [(0, 1, 1.0), (1, 0, 2.0)])


def test_rejects_disconnected_with_components():
    with pytest.raises(ValueError, match=r"\[0, 1\], \[2, 3\]"):
        bp.build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])


def test_validate_measures_passes_on_built(p3):
    report = bp.validate_measures(p3)
    assert report.passed
    assert report.residuals.max() == 0.0


def test_validate_measures_flags_corruption(p3):
    bad = bp.WeightedGraph(n=p3.n, edge_u=p3.edge_u.copy(),
                           edge_v=p3.edge_v.copy(), edge_w=p3.edge_w.copy(),
                           pi=np.array([0.3, 0.5, 0.25]))
    report = bp.validate_measures(bad)
    assert not report.passed
    assert report.worst_vertex == 0


def test_laplacian_quadratic_form_matches_edge_sum(k3, c5):
    rng = np.random.default_rng(0)
    for g in (k3, c5):
        for _ in range(20):
            f = rng.standard_normal(g.n)
            assert math.isclose(f @ g.laplacian @ f, g.dirichlet(f),
                                abs_tol=1e-12)


def test_power_one_is_identical(p3):
    prod = bp.cartesian_power(p3, 1)
    dense = prod.to_weighted_graph()
    assert dense is p3
    assert prod.product_edge_mass((0,), (1,)) == p3.edge_mass(0, 1)


def test_k2_square_adjacency(k2):
    prod = bp.cartesian_power(k2, 2)
    assert prod.product_edge_mass((0, 0), (0, 1)) == 0.25
    assert prod.product_edge_mass((0, 0), (1, 0)) == 0.25
    assert prod.product_edge_mass((0, 0), (1, 1)) == 0.0


def test_k3_square_degrees(k3):
    prod = bp.cartesian_power(k3, 2)
    dense = prod.to_weighted_graph()
    assert dense.n == 9
    degrees = np.zeros(9, dtype=int)
    np.add.at(degrees, dense.edge_u, 1)
    np.add.at(degrees, dense.edge_v, 1)
    assert degrees.tolist() == [4] * 9


def test_product_masses_sum_to_one(k3, p3):
    for g, k in [(k3, 2), (p3, 2), (k3, 3)]:
        _, _, ew = bp.cartesian_power(g, k).dense_edges()
        assert math.isclose(ew.sum(), 1.0, abs_tol=1e-12)


def test_product_measure_consistency(p3):
    for g, k in [(p3, 2), (p3, 3)]:
        dense = bp.cartesian_power(g, k).to_weighted_graph()
        assert bp.validate_measures(dense).passed


def test_product_pi_is_product(p3):
    prod = bp.cartesian_power(p3, 2)
    dense = prod.to_weighted_graph()
    expected = np.kron(p3.pi, p3.pi)
    assert np.allclose(dense.pi, expected, atol=1e-15)
    assert np.allclose(prod.pi_product(), expected, atol=1e-15)


def test_index_tuple_roundtrip(k3):
    prod = bp.cartesian_power(k3, 3)
    for flat in range(prod.num_vertices):
        assert prod.index_of(prod.tuple_of(flat)) == flat


def test_dense_cap_enforced(k2):
    prod = bp.cartesian_power(k2, 30, dense_cap=1 << 10)
    assert not prod.within_cap
    with pytest.raises(bp.DenseCapError):
        prod.pi_product()


def test_graph_json_roundtrip(tmp_path, c5):
    path = tmp_path / "c5.json"
    bp.save_graph(c5, path)
    data = json.loads(path.read_text())
    assert data["n"] == 5
    loaded = bp.load_graph(path)
    assert np.allclose(loaded.edge_w, c5.edge_w)
    assert np.allclose(loaded.pi, c5.pi)
