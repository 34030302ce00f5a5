"""Localization and norms of wavelets as the bandwidth N doubles."""
import math

from spherewave.diagnostics import localization_profile, lp_norm_estimate
from spherewave.filters import bump_filter
from spherewave.wavelet import WaveletSpec, optimal_profile

for N in (16, 32, 64):
    spec = WaveletSpec(4, optimal_profile(4, 1), bump_filter(), float(N))
    rep = localization_profile(spec)
    print(f"N={N}: peak {rep.peak:.4g}, max weighted ratio {rep.max_ratio:.4g} (exponent {rep.exponent})")
    for a, b, sup, ratio in rep.rows()[:4]:
        print(f"    N*theta in [{a:g}, {b:g}]: sup {sup:.3e}  ratio {ratio:.3e}")

# ||Psi||_p grows like N^{(d-1)(1-1/p)}.
prev = {}
for N in (16, 32, 64):
    spec = WaveletSpec(4, optimal_profile(4, 1), bump_filter(), float(N))
    vals = {p: lp_norm_estimate(spec, p).value for p in (1.0, 2.0, math.inf)}
    if prev:
        print(f"N={N}: doubling ratios " + ", ".join(f"p={p:g}: {vals[p] / prev[p]:.3f}" for p in vals))
    prev = vals
