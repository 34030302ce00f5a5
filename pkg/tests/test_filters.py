import numpy as np
import pytest
from hypothesis import given, strategies as st

from spherewave.filters import FilterProfile, bump_filter, kappa, phi, spline_filter

PROFILES = [bump_filter(), spline_filter(0), spline_filter(1), spline_filter(3)]


@pytest.mark.parametrize("f", PROFILES)
def test_phi_examples(f):
    assert phi(f, 0.25) == 1.0
    assert phi(f, 2.0) == 0.0
    assert 0.0 < phi(f, 0.75) < 1.0
    assert phi(f, 0.75) >= phi(f, 0.8)


@pytest.mark.parametrize("f", PROFILES)
def test_kappa_examples(f):
    assert kappa(f, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert kappa(f, 0.4) == 0.0
    assert kappa(f, 3.0) == 0.0


@pytest.mark.parametrize("f", PROFILES)
def test_partition_identity(f, rng):
    t = rng.uniform(0, 3, 100)
    err = phi(f, t) ** 2 + kappa(f, t) ** 2 - phi(f, t / 2) ** 2
    assert np.max(np.abs(err)) < 1e-14


@given(t=st.floats(0.0, 10.0), s=st.floats(0.0, 10.0), q=st.integers(0, 5))
def test_phi_is_monotone(t, s, q):
    for f in (bump_filter(), spline_filter(q)):
        lo, hi = min(t, s), max(t, s)
        assert phi(f, lo) >= phi(f, hi)
        assert 0.0 <= phi(f, hi) <= 1.0


def test_kappa_squares_telescope():
    # sum_j kappa(n / 2^j)^2 = 1 - phi(n)^2 for every n
    f = bump_filter()
    n = np.arange(0, 200)
    total = sum(kappa(f, n / 2.0**j) ** 2 for j in range(-1, 12))
    np.testing.assert_allclose(total, 1.0 - phi(f, 2.0 * n) ** 2, atol=1e-14)


def test_spline_smoothness_at_knots():
    # a C^q spline has q continuous derivatives at t = 1/2
    f = spline_filter(2)
    h = 1e-3
    vals = [phi(f, 0.5 + k * h) for k in range(4)]
    assert abs(vals[1] - vals[0]) < 1e-7


def test_bad_profiles_rejected():
    with pytest.raises(ValueError):
        FilterProfile("box")
    with pytest.raises(ValueError):
        spline_filter(-1)
    with pytest.raises(ValueError):
        phi(bump_filter(), -0.1)
    assert bump_filter().label() == "bump" and spline_filter(2).label() == "spline2"
