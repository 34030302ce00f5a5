"""Slices of optimally directional wavelets on S^3 written as CSV and PGM files.

Usage: python demos/07_slice_panels.py [output_dir]
"""
import os
import sys

from spherewave.diagnostics import fig1_grid, main_lobe_halfwidth, write_grid_csv, write_grid_pgm

out = sys.argv[1] if len(sys.argv) > 1 else "slice_panels"
os.makedirs(out, exist_ok=True)
for K in (1, 4, 9, 16):
    widths = []
    for N in (16, 32, 64):
        g = fig1_grid(K, N)
        write_grid_csv(g, os.path.join(out, f"psi_K{K}_N{N}.csv"))
        write_grid_pgm(g, os.path.join(out, f"psi_K{K}_N{N}.pgm"))
        widths.append(main_lobe_halfwidth(g))
    print(f"K={K:2d} half widths " + " ".join(f"{w:.4f}" for w in widths)
          + f"  ratios {widths[1] / widths[0]:.3f} {widths[2] / widths[1]:.3f}")
print("files in", out)
