import math

import numpy as np
import pytest

from spherewave.diagnostics import (
    autocorrelation,
    default_q_eff,
    fig1_grid,
    localization_profile,
    lp_norm,
    lp_norm_estimate,
    main_lobe_halfwidth,
    stabilizer_rotation,
    steer_check,
    steering_nodes,
    write_grid_csv,
    write_grid_pgm,
)
from spherewave.filters import bump_filter, spline_filter
from spherewave.sphere import check_rotation, embed_rotation, north_pole, random_rotation, so2_rotation
from spherewave.wavelet import (
    WaveletSpec,
    custom_profile,
    d3_profile,
    eval_wavelet,
    optimal_profile,
    psi_grid,
    zonal_profile,
)


def _spec(d, K, N, filt=None):
    if K == 0:
        prof = zonal_profile(d)
    else:
        prof = d3_profile(K) if d == 3 else optimal_profile(d, K)
    return WaveletSpec(d, prof, bump_filter() if filt is None else filt, float(N))


@pytest.mark.parametrize("d,K,N", [(3, 0, 8), (3, 3, 8), (4, 2, 8), (5, 3, 6), (6, 1, 5)])
def test_l2_norm_matches_parseval(d, K, N):
    spec = _spec(d, K, N)
    est = lp_norm_estimate(spec, 2)
    assert est.exact
    assert abs(est.value - math.sqrt(spec.l2_norm_sq())) < 1e-9


def test_l2_norm_of_custom_profile():
    prof = custom_profile(4, 2, {1: {1: 1.0}, 2: {0: 0.6, 2: 0.8}})
    spec = WaveletSpec(4, prof, bump_filter(), 4.0)
    assert abs(lp_norm(spec, 2) - math.sqrt(spec.l2_norm_sq())) < 1e-9


def test_other_norms_converge_and_bound():
    spec = _spec(4, 2, 8)
    l1, linf = lp_norm_estimate(spec, 1), lp_norm_estimate(spec, math.inf)
    assert l1.rel_change < 1e-2 and linf.rel_change < 1e-2
    # ||Psi||_1 <= ||Psi||_2 <= ||Psi||_inf for a probability measure
    assert l1.value <= lp_norm(spec, 2) <= linf.value
    assert linf.value >= abs(eval_wavelet(spec, None, north_pole(4))[0]) * (1 - 1e-12)
    with pytest.raises(ValueError):
        lp_norm(spec, 0)


def test_stabilizer_rotation():
    for d in (3, 4, 5):
        h = stabilizer_rotation(d, 0.7)
        assert check_rotation(h)
        np.testing.assert_allclose(h @ north_pole(d), north_pole(d), atol=1e-15)
    np.testing.assert_allclose(stabilizer_rotation(3, 0.7), so2_rotation(0.7))


@pytest.mark.parametrize(
    "spec",
    [
        _spec(3, 3, 6),
        WaveletSpec(3, d3_profile(2, "extremal"), bump_filter(), 5.0),
        _spec(4, 3, 6),
        _spec(5, 4, 6),
        WaveletSpec(4, custom_profile(4, 2, {1: {1: 1.0}, 2: {0: 0.6, 2: 0.8}}), bump_filter(), 4.0),
    ],
)
def test_autocorrelation_two_paths(spec):
    for angle in np.linspace(0, 2 * np.pi, 9):
        a = autocorrelation(spec, angle)
        b = autocorrelation(spec, angle, method="closed")
        assert abs(a - b) < 1e-9
    assert autocorrelation(spec, 0.0) == pytest.approx(spec.l2_norm_sq(), rel=1e-12)


def test_autocorrelation_shape_is_fixed_beyond_2K():
    # all degrees reach K once N >= 2K, so the normalized curve is cos^K
    for N in (4.0, 8.0, 16.0):
        spec = _spec(4, 2, N)
        for angle in (0.3, 1.1, 2.5):
            r = autocorrelation(spec, angle, method="closed").real / spec.l2_norm_sq()
            assert r == pytest.approx(math.cos(angle) ** 2, abs=1e-12)


def test_autocorrelation_rejects_unknown_method():
    with pytest.raises(ValueError):
        autocorrelation(_spec(4, 1, 2), 0.1, method="magic")


def test_steering_d3(rng):
    spec = _spec(3, 3, 6)
    rots, _ = steering_nodes(spec)
    assert len(rots) == 7
    assert steer_check(spec, rots[2]) < 1e-12
    for _ in range(3):
        h = so2_rotation(rng.uniform(0, 2 * np.pi))
        assert steer_check(spec, h) < 1e-9
        assert steer_check(spec, h, n_nodes=5) > 1e-6


def test_steering_symmetric(rng):
    for d, K in [(4, 2), (5, 2)]:
        spec = _spec(d, K, 4)
        h = embed_rotation(random_rotation(rng, d - 1), d)
        assert steer_check(spec, h, n_test=50) < 1e-9
        assert steer_check(spec, h, degree=max(2 * K - 2, 0), n_test=50) > 1e-6


def test_steering_rejects_rotation_moving_pole(rng):
    spec = _spec(3, 2, 4)
    with pytest.raises(ValueError):
        steer_check(spec, random_rotation(rng, 3))


def test_default_q_eff():
    assert default_q_eff(_spec(3, 2, 4)) == 6
    assert default_q_eff(_spec(3, 2, 4, spline_filter(5))) == 2


def test_zonal_slice_is_phi_independent():
    spec = _spec(4, 0, 8)
    G = psi_grid(spec, np.linspace(0, np.pi, 20), np.linspace(0, 2 * np.pi, 11))
    assert np.max(np.abs(G - G[:, :1])) < 1e-12


def test_localization_report_structure():
    spec = _spec(3, 1, 16)
    rep = localization_profile(spec)
    a = [row[0] for row in rep.rows()]
    b = [row[1] for row in rep.rows()]
    assert a[0] == 0.0 and b[0] == 1.0 and b[-1] == pytest.approx(16 * np.pi)
    assert rep.exponent == 4
    assert rep.peak == pytest.approx(max(row[2] for row in rep.rows()))
    # exponent zero: the first band ratio is the normalized sup
    flat = localization_profile(spec, n_annuli=2, q_eff=1)
    assert len(flat.annuli) == 2
    assert flat.annuli[0][3] == pytest.approx(flat.annuli[0][2] / 16.0**2)


def test_localization_ratio_does_not_grow():
    ratios = [localization_profile(_spec(3, 1, N)).max_ratio for N in (16, 32, 64)]
    assert max(ratios) <= 2 * ratios[0]


def test_fig1_grid_small(tmp_path):
    g = fig1_grid(3, 16, nt=65, nphi=32)
    assert g.symmetry_error() < 1e-9
    assert np.max(np.abs(g.values)) == pytest.approx(1.0)
    assert 0 < main_lobe_halfwidth(g) < np.pi / 2
    csv, pgm = tmp_path / "g.csv", tmp_path / "g.pgm"
    write_grid_csv(g, csv)
    write_grid_pgm(g, pgm)
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,phi,value" and len(lines) == 1 + 65 * 32
    t, phi, v = map(float, lines[1 + 32 + 5].split(","))
    assert t == g.t[1] and phi == g.phi[5] and v == g.values[1, 5]
    raw = pgm.read_bytes()
    assert raw.startswith(b"P5\n32 65\n255\n")
    assert len(raw) == len(b"P5\n32 65\n255\n") + 65 * 32


def test_fig1_grid_rejects_odd_phi_count():
    with pytest.raises(ValueError):
        fig1_grid(2, 16, nt=9, nphi=7)


def test_halfwidth_halves_with_bandwidth():
    w = [main_lobe_halfwidth(fig1_grid(4, N, nt=257, nphi=32)) for N in (16, 32)]
    assert 0.4 <= w[1] / w[0] <= 0.6
