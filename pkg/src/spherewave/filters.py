"""Low-pass cutoff ``phi`` and the induced band-pass ``kappa``.

``phi`` equals 1 on ``[0, 1/2]``, 0 on ``[1, inf)`` and decreases in
between; ``kappa`` is defined through ``phi(t)^2 + kappa(t)^2 = phi(t/2)^2``
and is supported in ``[1/2, 2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["FilterProfile", "phi", "kappa", "bump_filter", "spline_filter"]


def _b(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def _smoothstep(x, q: int):
    # degree 2q+1 polynomial with q vanishing derivatives at 0 and 1
    x = np.clip(x, 0.0, 1.0)
    acc = np.zeros_like(x)
    for i in range(q + 1):
        acc = acc + math.comb(q + i, i) * (1.0 - x) ** i
    return x ** (q + 1) * acc


@dataclass(frozen=True)
class FilterProfile:
    """Shape of the cutoff transition on ``(1/2, 1)``.

    ``kind="bump"`` gives a C-infinity transition built from ``exp(-1/s)``;
    ``kind="spline"`` a piecewise polynomial of class ``C^q``.
    """

    kind: str = "bump"
    q: int = 0

    def __post_init__(self):
        if self.kind not in ("bump", "spline"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if self.kind == "spline" and self.q < 0:
            raise ValueError("spline order must be non-negative")

    @property
    def smoothness(self) -> float:
        return math.inf if self.kind == "bump" else float(self.q)

    def label(self) -> str:
        return "bump" if self.kind == "bump" else f"spline{self.q}"

    def phi(self, t):
        return phi(self, t)

    def kappa(self, t):
        return kappa(self, t)


def bump_filter() -> FilterProfile:
    return FilterProfile("bump")


def spline_filter(q: int) -> FilterProfile:
    return FilterProfile("spline", q)


def phi(profile: FilterProfile, t):
    """Cutoff values; raises ValueError for negative arguments."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("phi is defined for t >= 0")
    if profile.kind == "bump":
        a = _b(2.0 - 2.0 * t_arr)
        b = _b(2.0 * t_arr - 1.0)
        out = np.where(t_arr <= 0.5, 1.0, np.where(t_arr >= 1.0, 0.0, a / np.where(a + b > 0, a + b, 1.0)))
    else:
        out = 1.0 - _smoothstep(2.0 * t_arr - 1.0, profile.q)
        out = np.where(t_arr <= 0.5, 1.0, np.where(t_arr >= 1.0, 0.0, out))
    return out[()] if out.ndim == 0 else out


def kappa(profile: FilterProfile, t):
    """``sqrt(max(0, phi(t/2)^2 - phi(t)^2))``."""
    t_arr = np.asarray(t, dtype=float)
    out = np.sqrt(np.maximum(0.0, phi(profile, t_arr / 2.0) ** 2 - phi(profile, t_arr) ** 2))
    return out[()] if out.ndim == 0 else out
