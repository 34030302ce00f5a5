"""Tight frame: analysis, Parseval, exact reconstruction and the partial projector."""
import numpy as np

from spherewave.cli import random_signal
from spherewave.frame import analyze, build_frame, lambda_operator, parseval_gap, synthesize

d, K, J_max = 3, 2, 4
frame = build_frame(d, K, J_max)
print(f"frame d={d} K={K} J_max={J_max}: {frame.n_atoms} atoms")
for sc in frame.scales:
    print(f"  scale {sc.j}: {sc.s} sphere nodes x {sc.r} directions")

f = random_signal(d, frame.exact_degree, seed=1)
c = analyze(frame, f)
print("energy", c.energy()[0], "||f||^2", f.norm() ** 2, "gap", parseval_gap(frame, f))

g = synthesize(frame, c, out_degree=f.max_degree)
print("reconstruction error:", g.max_abs_diff(f))

# Keeping only some atoms of scale J + 1 still reproduces low degree signals.
J = 3
low = random_signal(d, 2 ** (J - 1), seed=2)
rng = np.random.default_rng(3)
omega = rng.choice(frame.scales[J + 1].n_atoms, size=100, replace=False)
print("projector error with 100 atoms:", lambda_operator(frame, low, J, omega).max_abs_diff(low))
