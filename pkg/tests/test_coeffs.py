import numpy as np
import pytest

from spherewave.coeffs import CoefficientVector, flat_position, project_function
from spherewave.sphere import HarmonicIndex, enumerate_indices, eval_harmonic

from conftest import unit_vectors


def test_basis_vector_and_indexing():
    v = CoefficientVector.basis(4, 2, (1, -1), max_degree=3)
    assert v[(2, 1, -1)] == 1.0
    assert v[HarmonicIndex(4, 2, (1, -1))] == 1.0
    assert v.norm() == 1.0
    assert [i for i, _ in v.entries()] == [HarmonicIndex(4, 2, (1, -1))]


def test_index_errors():
    v = CoefficientVector(3, 2)
    with pytest.raises(IndexError):
        v[(3, 0)]
    with pytest.raises(IndexError):
        v[(1, 2)]
    with pytest.raises(ValueError):
        CoefficientVector(3, 2, np.zeros(5))


def test_flat_positions_are_consecutive():
    pos = [flat_position(4, n, i.k) for n in range(4) for i in enumerate_indices(4, n)]
    assert pos == list(range(len(pos)))


def test_resize_and_arithmetic(rng):
    a = CoefficientVector(3, 2, rng.standard_normal(9))
    b = CoefficientVector(3, 4, rng.standard_normal(25))
    s = a + b
    assert s.max_degree == 4
    np.testing.assert_allclose(s.values[:9], a.values + b.values[:9])
    assert (2 * a - a).max_abs_diff(a) == 0.0
    assert a.resized(4).resized(2).max_abs_diff(a) == 0.0
    assert b.resized(1).values.size == 4


def test_degree_norms_and_effective_degree():
    v = CoefficientVector.basis(3, 2, (1,), max_degree=5) * 3.0
    np.testing.assert_allclose(v.degree_norms(), [0, 0, 3, 0, 0, 0])
    assert v.effective_degree() == 2


def test_evaluate_matches_basis_sum(rng):
    d = 4
    v = CoefficientVector(d, 3, rng.standard_normal(30) + 1j * rng.standard_normal(30))
    x = unit_vectors(rng, 9, d)
    ref = sum(val * eval_harmonic(i, x) for i, val in v.entries())
    np.testing.assert_allclose(v.evaluate(x), ref, atol=1e-12)


def test_project_function_recovers_polynomial(rng):
    d = 5
    v = CoefficientVector(d, 3, rng.standard_normal(50) + 1j * rng.standard_normal(50))
    w = project_function(v.evaluate, d, 3)
    assert w.max_abs_diff(v) < 1e-12
