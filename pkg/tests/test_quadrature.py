import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import roots_jacobi

from spherewave.quadrature import (
    Rule1D,
    gauss_gegenbauer,
    integrate,
    so2_rule,
    sphere_directional_rule,
    sphere_rule,
)
from spherewave.sphere import addition_kernel, check_rotation, enumerate_indices, eval_harmonic, north_pole

from conftest import unit_vectors


def test_gauss_legendre_two_nodes():
    r = gauss_gegenbauer(0.0, 2)
    np.testing.assert_allclose(r.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], atol=1e-15)
    assert integrate(r, lambda t: t**2) == pytest.approx(2 / 3, abs=1e-15)


def test_half_weight_single_node():
    r = gauss_gegenbauer(0.5, 1)
    assert r.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert r.weights[0] == pytest.approx(np.pi / 2, rel=1e-14)


@given(alpha=st.sampled_from([-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 7.0]), n=st.integers(1, 80))
def test_gauss_gegenbauer_matches_scipy(alpha, n):
    r = gauss_gegenbauer(alpha, n)
    x, w = roots_jacobi(n, alpha, alpha)
    np.testing.assert_allclose(r.nodes, x, atol=1e-13)
    np.testing.assert_allclose(r.weights, w, rtol=1e-10, atol=1e-15)


def test_gauss_rule_exact_degree():
    r = gauss_gegenbauer(1.0, 6)
    assert isinstance(r, Rule1D) and r.exact_degree == 11
    # int t^10 (1 - t^2) dt = 2/11 - 2/13
    assert integrate(r, lambda t: t**10) == pytest.approx(2 / 11 - 2 / 13, rel=1e-13)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_sphere_rule_constants_and_means(d):
    N = 6
    rule = sphere_rule(d - 1, N)
    assert integrate(rule, lambda x: np.ones(len(x))) == pytest.approx(1.0, abs=1e-14)
    for n in range(1, N + 1):
        for idx in enumerate_indices(d, n):
            assert abs(integrate(rule, lambda x: eval_harmonic(idx, x))) < 1e-12


@pytest.mark.parametrize("d,n", [(3, 4), (4, 3), (5, 2)])
def test_harmonic_norms_on_degree_2n_rule(d, n):
    rule = sphere_rule(d - 1, 2 * n)
    for idx in enumerate_indices(d, n):
        val = integrate(rule, lambda x: np.abs(eval_harmonic(idx, x)) ** 2)
        assert val == pytest.approx(1.0, abs=1e-10)


def test_zonal_kernel_mean_vanishes(rng):
    for d in (3, 4):
        eta = unit_vectors(rng, 1, d)[0]
        for n in range(1, 7):
            rule = sphere_rule(d - 1, n)
            assert abs(integrate(rule, lambda x: addition_kernel(d, n, x @ eta))) < 1e-10


def test_sphere_rule_points_and_weights():
    rule = sphere_rule(3, 8)
    np.testing.assert_allclose(np.linalg.norm(rule.points, axis=1), 1.0, atol=1e-14)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all(rule.weights > 0)
    assert len(rule) == np.prod(rule.grid_shape)


@pytest.mark.parametrize("d", [3, 4])
def test_node_count_growth(d):
    counts = [len(sphere_rule(d - 1, 2 ** (j + 1))) / 2 ** (j * (d - 1)) for j in range(1, 6)]
    assert max(counts) / min(counts) < 2 ** (d - 1)


def test_so2_rule():
    r = so2_rule(0)
    assert len(r) == 1 and r.angles[0] == 0.0 and r.weights[0] == 1.0
    for K in range(5):
        r = so2_rule(K)
        for k in range(-2 * K, 2 * K + 1):
            val = integrate(r, lambda g: np.exp(1j * k * g))
            assert abs(val - (k == 0)) < 1e-13
        # first frequency outside the exactness range aliases onto the constant
        assert integrate(r, lambda g: np.exp(1j * (2 * K + 1) * g)) == pytest.approx(1.0, abs=1e-13)


def test_sphere_directional_rule_fixes_pole():
    r = sphere_directional_rule(4, 4)
    assert r.weights.sum() == pytest.approx(1.0, abs=1e-14)
    for g in r.rotations:
        assert check_rotation(g)
        np.testing.assert_allclose(g @ north_pole(4), north_pole(4), atol=1e-14)


def test_integrate_zero_and_bad_rule():
    assert integrate(sphere_rule(2, 3), lambda x: np.zeros(len(x))) == 0.0
    with pytest.raises(TypeError):
        integrate(object(), lambda x: x)


def test_sphere_rule_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sphere_rule(0, 3)
