"""Steering: any rotated copy is a combination of 2K+1 fixed copies (d = 3)."""
import numpy as np

from spherewave.diagnostics import steer_check
from spherewave.filters import bump_filter
from spherewave.sphere import so2_rotation
from spherewave.wavelet import WaveletSpec, d3_profile

rng = np.random.default_rng(0)
for K in (1, 2, 3, 4):
    spec = WaveletSpec(3, d3_profile(K), bump_filter(), 8.0)
    h = so2_rotation(rng.uniform(0, 2 * np.pi))
    ok = steer_check(spec, h, n_nodes=2 * K + 1)
    few = steer_check(spec, h, n_nodes=2 * K - 1)
    print(f"K={K}: error with {2 * K + 1} copies {ok:.1e}, with {2 * K - 1} copies {few:.1e}")
