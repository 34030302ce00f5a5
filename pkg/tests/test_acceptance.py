"""Acceptance checks, one test per criterion.

Each test prints a single ``CRITERION n: PASS|FAIL`` line with the measured
quantities and then asserts the same condition.  The module also runs as a
script: ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import math
import time

import numpy as np

from spherewave.cli import main as cli_main
from spherewave.cli import random_signal
from spherewave.diagnostics import (
    PsiGrid,
    autocorrelation,
    localization_profile,
    lp_norm_estimate,
    main_lobe_halfwidth,
    steer_check,
)
from spherewave.filters import bump_filter
from spherewave.frame import (
    analyze,
    analyze_batch,
    build_frame,
    lambda_operator_batch,
    parseval_gaps,
    synthesize_batch,
)
from spherewave.quadrature import sphere_rule
from spherewave.specfun import dim_harmonic, dim_poly
from spherewave.sphere import addition_kernel, random_points, so2_rotation
from spherewave.transform import harmonic_matrix
from spherewave.wavelet import WaveletSpec, d3_profile, optimal_profile, zonal_profile

FRAME_GRID = [(d, K, J) for d in (3, 4) for K in (0, 1, 2, 4) for J in (3, 4, 5)]


def _spec(d, K, N):
    if K == 0:
        prof = zonal_profile(d)
    else:
        prof = d3_profile(K) if d == 3 else optimal_profile(d, K)
    return WaveletSpec(d, prof, bump_filter(), float(N))


def check_tight_frame():
    t0 = time.perf_counter()
    worst = 0.0
    for d, K, J in FRAME_GRID:
        frame = build_frame(d, K, J)
        sigs = [random_signal(d, frame.exact_degree, 1000 * J + 100 * K + 10 * d + s) for s in range(20)]
        worst = max(worst, float(np.max(parseval_gaps(frame, sigs))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 300
    return ok, f"max relative Parseval gap {worst:.2e} (< 1e-10) over 24 configs x 20 signals, {elapsed:.0f} s (< 300 s)"


def check_reconstruction():
    rng = np.random.default_rng(2)
    worst_rt = worst_lam = 0.0
    for d, K, J in FRAME_GRID:
        frame = build_frame(d, K, J)
        D = frame.exact_degree
        F = np.stack([random_signal(d, D, 7 * J + 3 * K + d + s).values for s in range(3)], axis=1)
        back = synthesize_batch(frame, analyze_batch(frame, F, D), out_degree=D)
        worst_rt = max(worst_rt, float(np.max(np.abs(back - F))))
        # Lambda_{J', Omega} with J' + 1 = J_max reproduces f of degree 2^{J'-1}
        Jl = J - 1
        f = random_signal(d, 2 ** (Jl - 1), 11 * J + K + d)
        n_atoms = frame.scales[Jl + 1].n_atoms
        omegas = [rng.choice(n_atoms, size=int(rng.integers(0, n_atoms + 1)), replace=False) for _ in range(5)]
        for out in lambda_operator_batch(frame, f, Jl, omegas):
            worst_lam = max(worst_lam, out.max_abs_diff(f))
    ok = worst_rt < 1e-9 and worst_lam < 1e-9
    return ok, f"round trip max error {worst_rt:.2e}, projector max error {worst_lam:.2e} over 5 sets x 24 configs (< 1e-9)"


def _rule_error(d, N):
    rule = sphere_rule(d - 1, N)
    # sampled products Y_a conj(Y_b), degrees up to N / 2
    H = harmonic_matrix(d, N // 2, rule.points)
    G = (H.conj().T * rule.weights) @ H
    err = float(np.max(np.abs(G - np.eye(G.shape[0]))))
    # every harmonic up to degree N has mean zero, which covers all products of total degree <= N
    means = np.zeros(dim_poly(d, N), dtype=complex)
    for s in range(0, len(rule), 1000):
        means += rule.weights[s : s + 1000] @ harmonic_matrix(d, N, rule.points[s : s + 1000])
    means[0] -= 1.0
    return max(err, float(np.max(np.abs(means))))


def _scale_identity_error(d, K, J):
    frame = build_frame(d, K, J)
    f = random_signal(d, 2 ** (J + 1), 31 * d + K)
    c = analyze(frame, f)
    norms = f.degree_norms() ** 2
    n = np.arange(norms.size)
    worst = 0.0
    for j in range(1, J + 1):
        rhs = float(np.sum(np.asarray(frame.scales[j].spec.kappa(n)) ** 2 * norms))
        lhs = float(np.sum(np.abs(c.scales[j]) ** 2))
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_quadrature():
    rule_err = max(_rule_error(d, N) for d in (3, 4) for N in range(0, 33))
    prod_err = max(_scale_identity_error(d, K, 4) for d in (3, 4) for K in (0, 1, 2, 4))
    ok = rule_err < 1e-10 and prod_err < 1e-10
    return ok, f"rule exactness max error {rule_err:.2e} (d=3,4, N=0..32); per-scale product identity {prod_err:.2e} (< 1e-10)"


def check_addition():
    rng = np.random.default_rng(4)
    worst = 0.0
    for d in (3, 4, 5):
        x, y = random_points(rng, 100, d), random_points(rng, 100, d)
        Hx, Hy = harmonic_matrix(d, 8, x), harmonic_matrix(d, 8, y)
        c = np.sum(x * y, axis=1)
        start = 0
        for n in range(9):
            stop = start + dim_harmonic(d, n)
            lhs = np.sum(Hx[:, start:stop] * Hy[:, start:stop].conj(), axis=1)
            worst = max(worst, float(np.max(np.abs(lhs - addition_kernel(d, n, c)))))
            start = stop
    return worst < 1e-10, f"addition theorem max error {worst:.2e} (d=3,4,5, n<=8, 100 pairs; < 1e-10)"


def check_localization():
    Ns = (16, 32, 64)
    details, ok = [], True
    for d in (3, 4):
        lo, hi = 2 ** (d - 1) / 2, 2 ** d
        for K in (0, 1, 4):
            reps = [localization_profile(_spec(d, K, N)) for N in Ns]
            ratios = [r.max_ratio for r in reps]
            bounded = max(ratios) <= 2 * ratios[0]
            doubling = [reps[i + 1].peak / reps[i].peak for i in range(2)]
            in_window = all(lo <= q <= hi for q in doubling)
            ok &= bounded and in_window
            details.append(
                f"d={d} K={K} ratio max/first {max(ratios) / ratios[0]:.2f} peak doubling "
                + "/".join(f"{q:.2f}" for q in doubling)
            )
    return ok, "ratio never exceeds 2x its N=16 value, peak doubling in [2^(d-1)/2, 2^d]: " + "; ".join(details)


def check_norms():
    l2_err, ok_conv, ok_dbl, parts = 0.0, True, True, []
    for d in (3, 4):
        for K in (0, 1, 4):
            for N in (16, 32, 64):
                spec = _spec(d, K, N)
                l2_err = max(l2_err, abs(lp_norm_estimate(spec, 2).value - math.sqrt(spec.l2_norm_sq())))
        for p in (1.0, math.inf):
            target = 2 ** ((d - 1) * (1 - 1 / p))
            for K in (0, 4):
                est = [lp_norm_estimate(_spec(d, K, N), p) for N in (16, 32, 64)]
                ok_conv &= all(e.rel_change < 0.01 for e in est)
                q = [est[i + 1].value / est[i].value for i in range(2)]
                ok_dbl &= all(target / 2 <= r <= 2 * target for r in q)
                parts.append(f"d={d} K={K} p={p:g}: " + "/".join(f"{r:.2f}" for r in q) + f" vs {target:g}")
    ok = l2_err < 1e-9 and ok_conv and ok_dbl
    return ok, f"L2 two-path max diff {l2_err:.2e} (< 1e-9); grid change < 1%: {ok_conv}; doubling ratios " + "; ".join(parts)


def check_autocorrelation():
    angles = np.linspace(0.0, np.pi, 20)
    worst = 0.0
    for K in (1, 2, 4):
        for N in (4.0, 8.0, 16.0):
            spec = _spec(4, K, N)
            for a in angles:
                worst = max(worst, abs(autocorrelation(spec, a) - autocorrelation(spec, a, method="closed")))
    norm_err = 0.0
    for d in (4, 5, 6, 8):
        for K in range(0, 17):
            prof = optimal_profile(d, K)
            for n in range(1, K + 3):
                norm_err = max(norm_err, abs(sum(abs(v) ** 2 for v in prof.components(n).values()) - 1.0))
    ok = worst < 1e-9 and norm_err < 1e-12
    return ok, f"auto-correlation max diff {worst:.2e} (d=4, K=1,2,4, 20 angles; < 1e-9); table norm error {norm_err:.2e} (< 1e-12)"


def check_steering():
    rng = np.random.default_rng(8)
    worst, weakest = 0.0, math.inf
    for K in range(0, 5):
        spec = _spec(3, K, 8)
        for _ in range(5):
            h = so2_rotation(rng.uniform(0, 2 * np.pi))
            worst = max(worst, steer_check(spec, h, n_nodes=2 * K + 1))
            if K >= 1:
                weakest = min(weakest, steer_check(spec, h, n_nodes=2 * K - 1))
    ok = worst < 1e-9 and weakest > 1e-6
    return ok, f"M=2K+1 max error {worst:.2e} (< 1e-9); M=2K-1 smallest error {weakest:.2e} (> 1e-6); d=3, K<=4"


def check_figure_panels(outdir):
    t0 = time.perf_counter()
    sym, bands, ratios, codes = 0.0, [], [], []
    for K in (1, 4, 9, 16):
        widths = []
        for N in (16, 32, 64):
            path = f"{outdir}/psi_K{K}_N{N}.csv"
            argv = ["psi-grid", "--d", "4", "--K", str(K), "--N", str(N), "--out", path,
                    "--pgm", f"{outdir}/psi_K{K}_N{N}.pgm"]
            with contextlib.redirect_stdout(io.StringIO()):
                codes.append(cli_main(argv))
            data = np.loadtxt(path, delimiter=",", skiprows=1)
            t = np.unique(data[:, 0])
            vals = data[:, 2].reshape(t.size, -1)
            half = vals.shape[1] // 2
            sym = max(sym, float(np.max(np.abs(np.roll(vals, -half, axis=1) - (-1) ** K * vals))))
            grid = PsiGrid(4, K, float(N), t, np.unique(data[:, 1]), vals)
            widths.append(main_lobe_halfwidth(grid))
            if N == 64:
                i = int(np.argmax(np.max(np.abs(vals), axis=1)))
                bands.append(N * t[i])
        ratios += [widths[i + 1] / widths[i] for i in range(2)]
    elapsed = time.perf_counter() - t0
    ok = (
        all(c == 0 for c in codes)
        and sym < 1e-9
        and all(0.4 <= r <= 0.6 for r in ratios)
        and all(b <= 2.0 for b in bands)
        and elapsed < 600
    )
    return ok, (
        f"12 panels, symmetry error {sym:.2e} (< 1e-9), half-width ratios {min(ratios):.3f}..{max(ratios):.3f} "
        f"(in [0.4, 0.6]), peak at N*t <= {max(bands):.2f} for N=64 (<= 2), {elapsed:.0f} s (< 600 s)"
    )


def test_criterion_1_tight_frame(report):
    ok, detail = check_tight_frame()
    report(1, ok, detail)
    assert ok, detail


def test_criterion_2_reconstruction(report):
    ok, detail = check_reconstruction()
    report(2, ok, detail)
    assert ok, detail


def test_criterion_3_quadrature(report):
    ok, detail = check_quadrature()
    report(3, ok, detail)
    assert ok, detail


def test_criterion_4_addition(report):
    ok, detail = check_addition()
    report(4, ok, detail)
    assert ok, detail


def test_criterion_5_localization(report):
    ok, detail = check_localization()
    report(5, ok, detail)
    assert ok, detail


def test_criterion_6_norms(report):
    ok, detail = check_norms()
    report(6, ok, detail)
    assert ok, detail


def test_criterion_7_autocorrelation(report):
    ok, detail = check_autocorrelation()
    report(7, ok, detail)
    assert ok, detail


def test_criterion_8_steering(report):
    ok, detail = check_steering()
    report(8, ok, detail)
    assert ok, detail


def test_criterion_9_figure_panels(report, tmp_path):
    ok, detail = check_figure_panels(str(tmp_path))
    report(9, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import sys
    import tempfile

    checks = [check_tight_frame, check_reconstruction, check_quadrature, check_addition, check_localization,
              check_norms, check_autocorrelation, check_steering]
    failed = 0
    for number, fn in enumerate(checks, start=1):
        ok, detail = fn()
        failed += not ok
        print(f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    with tempfile.TemporaryDirectory() as tmp:
        ok, detail = check_figure_panels(tmp)
    failed += not ok
    print(f"CRITERION 9: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
