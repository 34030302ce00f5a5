"""Spherical harmonics on S^{d-1}: dimensions, the explicit basis and the addition theorem."""
import numpy as np

from spherewave.specfun import dim_harmonic, dim_poly, gegenbauer_eval
from spherewave.sphere import addition_kernel, enumerate_indices, eval_harmonic, random_points

rng = np.random.default_rng(0)

# Degree-n harmonics on S^3 (d = 4) are labelled by chains n >= k_1 >= |k_2|.
d = 4
for n in range(4):
    print(f"d={d} n={n} dim={dim_harmonic(d, n)} chains={[i.k for i in enumerate_indices(d, n)]}")
print("polynomials of degree <= 3:", dim_poly(d, 3))

# Gegenbauer polynomials carry the zonal part: C_3^1(1) = binom(4, 3).
print("C_3^1(1) =", gegenbauer_eval(1.0, 3, 1.0))

# Addition theorem: summing Y_k(x) conj(Y_k(y)) over a degree gives a function of <x, y>.
x, y = random_points(rng, 5, d), random_points(rng, 5, d)
n = 5
s = sum(eval_harmonic(i, x) * np.conj(eval_harmonic(i, y)) for i in enumerate_indices(d, n))
k = addition_kernel(d, n, np.sum(x * y, axis=1))
print("addition theorem max error:", np.max(np.abs(s - k)))
