"""Product quadrature on spheres and the directional rule on the circle."""
import numpy as np

from spherewave.quadrature import gauss_gegenbauer, integrate, so2_rule, sphere_rule
from spherewave.transform import harmonic_matrix

# A 1D Gauss rule for the weight (1 - t^2)^alpha, here Legendre with two nodes.
r = gauss_gegenbauer(0.0, 2)
print("nodes", r.nodes, "weights", r.weights, "int t^2 =", integrate(r, lambda t: t**2))

# A degree-N rule on S^2 is exact for all products of harmonics of total degree <= N.
for N in (4, 8, 16):
    rule = sphere_rule(2, N)
    H = harmonic_matrix(3, N // 2, rule.points)
    G = (H.conj().T * rule.weights) @ H
    print(f"N={N:2d} nodes={len(rule):4d} Gram error={np.max(np.abs(G - np.eye(len(G)))):.1e}")

# 2K+1 equally spaced rotations integrate e^{ik gamma} exactly for |k| <= 2K, and alias at 2K+1.
K = 3
rule = so2_rule(K)
print([round(abs(integrate(rule, lambda g: np.exp(1j * k * g))), 12) for k in range(2 * K + 2)])
