"""Directional wavelets: filters, optimal tables and the (t, phi) slice."""
import numpy as np

from spherewave.diagnostics import autocorrelation
from spherewave.filters import bump_filter
from spherewave.wavelet import WaveletSpec, optimal_profile, psi_grid, wavelet_coeffs

filt = bump_filter()
t = np.array([0.25, 0.75, 1.0, 1.5, 2.5])
print("phi  ", np.round(filt.phi(t), 4))
print("kappa", np.round(filt.kappa(t), 4))

# Optimal tables for d = 5, K = 2: weights on orders m = 0, 2 with signs (-1)^(m/2).
print("d=5 K=2 table:", optimal_profile(5, 2).components(4))

# A wavelet of bandwidth N lives on degrees N/2 < n < 2N; its L2 norm is sum dim H_n kappa^2.
spec = WaveletSpec(4, optimal_profile(4, 4), filt, 16.0)
c = wavelet_coeffs(spec)
print("degrees", spec.degrees[0], "..", spec.degrees[-1], " ||Psi||^2 =", c.norm() ** 2, spec.l2_norm_sq())

# Auto-correlation along the stabilizer is ||Psi||^2 cos(angle)^K for the optimal tables.
for a in (0.0, 0.5, 1.0):
    print(f"angle {a}: {autocorrelation(spec, a).real / spec.l2_norm_sq():.6f} vs cos^4 = {np.cos(a) ** 4:.6f}")

# The slice psi(t, phi) shows the symmetry psi(t, phi + pi) = (-1)^K psi(t, phi).
tt = np.linspace(0, np.pi / 2, 9)
ph = np.linspace(0, 2 * np.pi, 8, endpoint=False)
G = psi_grid(spec, tt, ph)
print("symmetry error:", np.max(np.abs(np.roll(G, -4, axis=1) - G)))
