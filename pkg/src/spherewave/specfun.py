"""Scalar special-function kernels.

Gegenbauer polynomials are evaluated with the forward three-term recurrence,
which is stable for ``lam > 0`` on ``[-1, 1]``.  All gamma-function products
are carried out in log space.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import gammaln

__all__ = [
    "gegenbauer_eval",
    "gegenbauer_table",
    "gegenbauer_deriv",
    "gegenbauer_at_one",
    "log_gamma_ratio",
    "harmonic_norm_A",
    "log_harmonic_norm_A",
    "dim_harmonic",
    "dim_poly",
]


def _check_lambda(lam):
    if np.any(np.asarray(lam) <= 0):
        raise ValueError(f"Gegenbauer index must be positive, got {lam!r}")


def gegenbauer_eval(lam: float, m: int, t, check_domain: bool = True):
    """Evaluate ``C_m^lam(t)``.

    Parameters
    ----------
    lam : float
        Index, ``lam > 0``.
    m : int
        Degree, ``m >= 0``.
    t : float or array_like
        Argument(s) in ``[-1, 1]``.

    Returns
    -------
    float or ndarray
        Same shape as `t`.
    """
    _check_lambda(lam)
    if m < 0:
        raise ValueError("degree must be non-negative")
    t = np.asarray(t, dtype=float)
    if check_domain and np.any(np.abs(t) > 1.0 + 1e-12):
        raise ValueError("Gegenbauer argument outside [-1, 1]")
    prev = np.ones_like(t)
    if m == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 2.0 * lam * t
    for k in range(2, m + 1):
        prev, cur = cur, (2.0 * (k + lam - 1.0) * t * cur - (k + 2.0 * lam - 2.0) * prev) / k
    return cur[()] if cur.ndim == 0 else cur


def gegenbauer_table(lam, m_max: int, t) -> np.ndarray:
    """All degrees ``0..m_max`` at once.

    `lam` and `t` broadcast against each other; the degree axis is appended
    last, so the result has shape ``broadcast(lam, t).shape + (m_max + 1,)``.
    """
    lam = np.asarray(lam, dtype=float)
    _check_lambda(lam)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast_shapes(lam.shape, t.shape)
    out = np.empty(shape + (m_max + 1,))
    out[..., 0] = 1.0
    if m_max >= 1:
        out[..., 1] = 2.0 * lam * t
    for k in range(2, m_max + 1):
        out[..., k] = (
            2.0 * (k + lam - 1.0) * t * out[..., k - 1] - (k + 2.0 * lam - 2.0) * out[..., k - 2]
        ) / k
    return out


def gegenbauer_deriv(lam: float, m: int, r: int, t):
    """r-th derivative of ``C_m^lam`` via ``d/dt C_m^lam = 2 lam C_{m-1}^{lam+1}``."""
    if r < 0:
        raise ValueError("derivative order must be non-negative")
    _check_lambda(lam)
    if r > m:
        return np.zeros_like(np.asarray(t, dtype=float))[()]
    # prod_{i<r} 2 (lam + i)
    log_fac = r * math.log(2.0) + gammaln(lam + r) - gammaln(lam)
    return math.exp(log_fac) * gegenbauer_eval(lam + r, m - r, t)


def gegenbauer_at_one(lam, m):
    """``C_m^lam(1) = Gamma(m + 2 lam) / (m! Gamma(2 lam))``."""
    lam = np.asarray(lam, dtype=float)
    m = np.asarray(m)
    return np.exp(gammaln(m + 2 * lam) - gammaln(m + 1.0) - gammaln(2 * lam))


def log_gamma_ratio(num_args: Sequence[float], den_args: Sequence[float]) -> float:
    """``sum(log Gamma(num)) - sum(log Gamma(den))`` for positive arguments."""
    num = np.asarray(num_args, dtype=float)
    den = np.asarray(den_args, dtype=float)
    if np.any(num <= 0) or np.any(den <= 0):
        raise ValueError("log_gamma_ratio needs positive arguments")
    return float(np.sum(gammaln(num)) - np.sum(gammaln(den)))


def _validate_chain(d: int, n: int, k: Sequence[int]):
    if d < 3:
        raise ValueError("dimension must be at least 3")
    k = tuple(int(v) for v in k)
    if len(k) != d - 2:
        raise IndexError(f"index chain for d={d} needs {d - 2} entries, got {len(k)}")
    chain = (n,) + k
    for a, b in zip(chain[:-2], chain[1:-1]):
        if not a >= b >= 0:
            raise IndexError(f"invalid harmonic index n={n}, k={k}")
    if abs(chain[-1]) > chain[-2]:
        raise IndexError(f"invalid harmonic index n={n}, k={k}")
    return chain


def log_harmonic_norm_A(d: int, n: int, k: Sequence[int]) -> float:
    """Logarithm of the normalization factor of ``Y_k^{d,n}``."""
    chain = _validate_chain(d, n, k)
    log_a2 = (d - 4) * (d - 2) * math.log(2.0) - gammaln(d / 2.0)
    for j in range(d - 2):
        kj = chain[j]
        l = abs(chain[j + 1])
        lam = (d - j - 2) / 2.0 + l
        log_a2 += (
            (2 * l - j) * math.log(2.0)
            + gammaln(kj - l + 1.0)
            + math.log(2 * kj + d - j - 2)
            + 2.0 * gammaln(lam)
            - 0.5 * math.log(math.pi)
            - gammaln(kj + l + d - j - 2.0)
        )
    return 0.5 * log_a2


def harmonic_norm_A(d: int, n: int, k: Sequence[int]) -> float:
    return math.exp(log_harmonic_norm_A(d, n, k))


def dim_harmonic(d: int, n: int) -> int:
    """Dimension of the degree-n harmonic space on the sphere in R^d."""
    if d < 3 or n < 0:
        raise ValueError("need d >= 3 and n >= 0")
    return (2 * n + d - 2) * math.factorial(n + d - 3) // (math.factorial(d - 2) * math.factorial(n))


def dim_poly(d: int, N: int) -> int:
    """Dimension of spherical polynomials of degree at most N."""
    if d < 3 or N < 0:
        raise ValueError("need d >= 3 and N >= 0")
    return (2 * N + d - 1) * math.factorial(N + d - 2) // (math.factorial(d - 1) * math.factorial(N))
