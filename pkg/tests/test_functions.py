"""Function tables: variances, entropy, decomposition, norm bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import boxprod as bp
from conftest import naive_component, naive_variance_along


def test_dictator_variances(k2):
    prod = bp.cartesian_power(k2, 2)
    f = bp.dictator(prod, 0)
    assert math.isclose(f.variance(), 1.0, abs_tol=1e-12)
    assert math.isclose(f.variance_along(0), 1.0, abs_tol=1e-12)
    assert math.isclose(f.variance_along(1), 0.0, abs_tol=1e-12)


def test_parity_variances(k2):
    prod = bp.cartesian_power(k2, 2)
    f = bp.parity(prod)
    assert math.isclose(f.variance_along(0), 1.0, abs_tol=1e-12)
    assert math.isclose(f.variance_along(1), 1.0, abs_tol=1e-12)


def test_constant_variances(k3):
    prod = bp.cartesian_power(k3, 2)
    f = bp.from_values(prod, np.full(9, 2.0))
    assert f.variance() == 0.0
    assert f.variance_along(0) == 0.0


def test_variance_along_two_routes(k3, p3):
    rng = np.random.default_rng(0)
    for g in (k3, p3):
        prod = bp.cartesian_power(g, 2)
        for _ in range(20):
            f = bp.from_values(prod, rng.standard_normal(9))
            for j in range(2):
                conditional = f.variance_along(j)
                form = f.centering_form(j)
                assert math.isclose(conditional, form, abs_tol=1e-12)
                assert math.isclose(conditional, naive_variance_along(f, j),
                                    abs_tol=1e-12)


def test_boolean_entropy_is_zero(k2):
    prod = bp.cartesian_power(k2, 3)
    rng = np.random.default_rng(1)
    f = bp.random_boolean(prod, rng)
    assert f.entropy_sq() == 0.0


def test_entropy_point_mass(k2):
    prod = bp.cartesian_power(k2, 1)
    f = bp.from_values(prod, [math.sqrt(2.0), 0.0])
    assert math.isclose(f.entropy_sq(), math.log(2.0), abs_tol=1e-12)


def test_entropy_scaling_identity(k3):
    prod = bp.cartesian_power(k3, 2)
    rng = np.random.default_rng(2)
    f = bp.from_values(prod, rng.standard_normal(9))
    scaled = f.with_values(3.0 * f.values)
    assert math.isclose(scaled.entropy_sq(), 9.0 * f.entropy_sq(),
                        rel_tol=1e-12)


def test_decompose_dictator(k2):
    prod = bp.cartesian_power(k2, 2)
    basis = bp.eigendecompose(k2)
    f = bp.dictator(prod, 0)
    dec = bp.decompose(f, basis)
    assert np.allclose(dec.parts[0].values, f.values, atol=1e-12)
    assert np.allclose(dec.parts[1].values, 0.0, atol=1e-12)


def test_decompose_parity_lands_in_last_slot(k2):
    prod = bp.cartesian_power(k2, 2)
    basis = bp.eigendecompose(k2)
    f = bp.parity(prod)
    dec = bp.decompose(f, basis)
    assert np.allclose(dec.parts[0].values, 0.0, atol=1e-12)
    assert np.allclose(dec.parts[1].values, f.values, atol=1e-12)


def test_decompose_constant(k3):
    prod = bp.cartesian_power(k3, 2)
    basis = bp.eigendecompose(k3)
    f = bp.from_values(prod, np.full(9, -1.0))
    dec = bp.decompose(f, basis)
    for part in dec.parts:
        assert np.allclose(part.values, 0.0, atol=1e-12)
    assert np.allclose(dec.constant.values, -1.0, atol=1e-12)


def test_decompose_matches_dense_oracle(k3):
    prod = bp.cartesian_power(k3, 3)
    basis = bp.eigendecompose(k3)
    rng = np.random.default_rng(3)
    f = bp.from_values(prod, rng.standard_normal(27))
    dec = bp.decompose(f, basis)
    for j in range(3):
        oracle = naive_component(f, j)
        assert np.allclose(dec.parts[j].values, oracle, atol=1e-9)


def test_decompose_invariants_random_boolean(k3):
    prod = bp.cartesian_power(k3, 2)
    basis = bp.eigendecompose(k3)
    rng = np.random.default_rng(4)
    for _ in range(30):
        f = bp.random_boolean(prod, rng)
        dec = bp.decompose(f, basis)
        total = sum(part.norm2_sq() for part in dec.parts)
        assert math.isclose(total, f.variance(), abs_tol=1e-9)
        for a in range(2):
            for b in range(a + 1, 2):
                assert abs(dec.parts[a].inner(dec.parts[b])) < 1e-9
        recon = dec.reconstruct()
        assert np.allclose(recon, f.values, atol=1e-9)


def test_l2_l1_bounds_dictator(k2):
    prod = bp.cartesian_power(k2, 2)
    basis = bp.eigendecompose(k2)
    f = bp.dictator(prod, 0)
    rows = bp.check_l2_l1_bounds(f, bp.decompose(f, basis))
    assert rows[0]["ok_l2"] and rows[0]["ok_l1"]
    assert math.isclose(rows[0]["l2_sq"], rows[0]["var_j"], abs_tol=1e-12)


def test_l2_l1_bounds_requires_boolean(k2):
    prod = bp.cartesian_power(k2, 2)
    basis = bp.eigendecompose(k2)
    f = bp.from_values(prod, [0.5, 1.0, -1.0, 0.25])
    with pytest.raises(ValueError):
        bp.check_l2_l1_bounds(f, bp.decompose(f, basis))


@settings(max_examples=40, deadline=None)
@given(bits=st.integers(min_value=0, max_value=2 ** 9 - 1),
       kk=st.sampled_from([1, 2]))
def test_l2_l1_bounds_random_boolean(bits, kk):
    base = bp.complete_graph(3)
    prod = bp.cartesian_power(base, kk)
    size = 3 ** kk
    vals = np.array([1.0 if (bits >> i) & 1 else -1.0 for i in range(size)])
    f = bp.from_values(prod, vals)
    basis = bp.eigendecompose(base)
    rows = bp.check_l2_l1_bounds(f, bp.decompose(f, basis))
    assert all(r["ok_l2"] and r["ok_l1"] for r in rows)


def test_efron_stein_additive_equality(k3):
    prod = bp.cartesian_power(k3, 2)
    rng = np.random.default_rng(5)
    g = rng.standard_normal(3)
    h = rng.standard_normal(3)
    vals = (g[:, None] + h[None, :]).reshape(-1)
    lhs, rhs = bp.efron_stein_check(bp.from_values(prod, vals))
    assert math.isclose(lhs, rhs, abs_tol=1e-12)


def test_efron_stein_parity(k2):
    prod = bp.cartesian_power(k2, 2)
    lhs, rhs = bp.efron_stein_check(bp.parity(prod))
    assert math.isclose(lhs, 2.0, abs_tol=1e-12)
    assert math.isclose(rhs, 1.0, abs_tol=1e-12)


def test_efron_stein_random(k3):
    prod = bp.cartesian_power(k3, 2)
    rng = np.random.default_rng(6)
    for _ in range(100):
        f = bp.from_values(prod, rng.standard_normal(9))
        lhs, rhs = bp.efron_stein_check(f)
        assert lhs >= rhs - 1e-9


def test_variance_sandwich(k2):
    # max_j var_j <= var <= k * max_j var_j for Boolean tables
    prod = bp.cartesian_power(k2, 3)
    rng = np.random.default_rng(7)
    for _ in range(50):
        f = bp.random_boolean(prod, rng)
        vs = [f.variance_along(j) for j in range(3)]
        top = max(vs)
        assert top <= f.variance() + 1e-12
        assert f.variance() <= 3 * top + 1e-12


def test_function_json_roundtrip(tmp_path, k2):
    prod = bp.cartesian_power(k2, 3)
    f = bp.dictator(prod, 1)
    path = tmp_path / "f.json"
    from boxprod.functions import load_function, save_function

    save_function(f, path)
    loaded = load_function(path, prod)
    assert np.array_equal(loaded.values, f.values)
