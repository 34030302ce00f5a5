"""Geometry and the explicit harmonic basis on the sphere in R^d.

Points are plain ``(..., d)`` arrays of cartesian coordinates.  The angle
convention is

    x_1 = sin t_{d-1} ... sin t_2 sin t_1
    x_2 = sin t_{d-1} ... sin t_2 cos t_1
    x_j = sin t_{d-1} ... sin t_j cos t_{j-1}      (3 <= j <= d)

so that ``t_{d-1}`` is the geodesic distance to the north pole ``e_d``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .specfun import gegenbauer_eval, harmonic_norm_A, _validate_chain

__all__ = [
    "HarmonicIndex",
    "enumerate_indices",
    "index_table",
    "angles_to_cartesian",
    "cartesian_to_angles",
    "coords_roundtrip",
    "eval_harmonic",
    "addition_kernel",
    "rotation_to_north",
    "rotations_to_north",
    "apply_rotations_to_north",
    "so2_rotation",
    "embed_rotation",
    "check_rotation",
    "geodesic_dist",
    "north_pole",
    "random_points",
    "random_rotation",
]


class HarmonicIndex(NamedTuple):
    """Degree ``n`` and chain ``k = (k_1, ..., k_{d-2})`` of one basis function."""

    d: int
    n: int
    k: tuple

    def validate(self) -> "HarmonicIndex":
        _validate_chain(self.d, self.n, self.k)
        return self

    @property
    def conj(self) -> "HarmonicIndex":
        """Index of the complex conjugate harmonic (last chain entry negated)."""
        return HarmonicIndex(self.d, self.n, self.k[:-1] + (-self.k[-1],))


def _chains(d: int, n: int):
    if d == 3:
        for k in range(-n, n + 1):
            yield (k,)
        return
    for k1 in range(n + 1):
        for rest in _chains(d - 1, k1):
            yield (k1,) + rest


def enumerate_indices(d: int, n: int) -> list[HarmonicIndex]:
    """All indices of degree `n`, lexicographic in ``(k_1, ..., k_{d-2})``."""
    if d < 3 or n < 0:
        raise ValueError("need d >= 3 and n >= 0")
    return [HarmonicIndex(d, n, k) for k in _chains(d, n)]


def index_table(d: int, max_degree: int) -> np.ndarray:
    """Integer array ``(M, d-1)`` of rows ``(n, k_1, ..., k_{d-2})``, n <= max_degree.

    Rows are in lexicographic order; this order defines the flat coefficient
    layout used throughout the package.
    """
    rows = [(n,) + k for n in range(max_degree + 1) for k in _chains(d, n)]
    return np.array(rows, dtype=np.int64).reshape(-1, d - 1)


def north_pole(d: int) -> np.ndarray:
    e = np.zeros(d)
    e[-1] = 1.0
    return e


def angles_to_cartesian(angles) -> np.ndarray:
    """Map ``(..., d-1)`` angles ``(t_1, ..., t_{d-1})`` to unit vectors ``(..., d)``."""
    angles = np.asarray(angles, dtype=float)
    m = angles.shape[-1]
    d = m + 1
    out = np.empty(angles.shape[:-1] + (d,))
    sin = np.sin(angles)
    cos = np.cos(angles)
    # running product sin t_{d-1} ... sin t_{j}
    prod = np.ones(angles.shape[:-1])
    for j in range(d, 2, -1):
        # x_j = prod_{i >= j} sin t_i * cos t_{j-1}
        out[..., j - 1] = prod * cos[..., j - 2]
        prod = prod * sin[..., j - 2]
    out[..., 0] = prod * sin[..., 0]
    out[..., 1] = prod * cos[..., 0]
    return out


def cartesian_to_angles(x, tol: float = 1e-8) -> np.ndarray:
    """Inverse of :func:`angles_to_cartesian`; rejects non-unit input."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(np.linalg.norm(x, axis=-1) - 1.0) > tol):
        raise ValueError("point is not on the unit sphere")
    d = x.shape[-1]
    out = np.empty(x.shape[:-1] + (d - 1,))
    # r_j = |(x_1, ..., x_j)|
    r = np.sqrt(np.cumsum(x**2, axis=-1))
    for j in range(2, d):
        out[..., j - 1] = np.arctan2(r[..., j - 1], x[..., j])
    out[..., 0] = np.mod(np.arctan2(x[..., 0], x[..., 1]), 2 * np.pi)
    return out


def coords_roundtrip(angles) -> np.ndarray:
    return cartesian_to_angles(angles_to_cartesian(angles))


def eval_harmonic(idx: HarmonicIndex, points) -> np.ndarray:
    """Evaluate ``Y_k^{d,n}`` at cartesian `points` from the product formula."""
    d, n, k = idx.d, idx.n, tuple(idx.k)
    chain = _validate_chain(d, n, k)
    points = np.asarray(points, dtype=float)
    theta = cartesian_to_angles(points)
    val = np.full(points.shape[:-1], harmonic_norm_A(d, n, k), dtype=complex)
    for j in range(d - 2):
        l = abs(chain[j + 1])
        th = theta[..., d - j - 2]
        lam = (d - j - 2) / 2.0 + l
        c = np.clip(np.cos(th), -1.0, 1.0)
        val = val * gegenbauer_eval(lam, chain[j] - l, c) * np.sin(th) ** l
    return val * np.exp(1j * chain[-1] * theta[..., 0])


def addition_kernel(d: int, n: int, c):
    """``(2n + d - 2)/(d - 2) * C_n^{(d-2)/2}(c)``."""
    c = np.clip(np.asarray(c, dtype=float), -1.0, 1.0)
    return (2 * n + d - 2) / (d - 2) * gegenbauer_eval((d - 2) / 2.0, n, c)


def _householder(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    return np.eye(v.size) - 2.0 * np.outer(v, v)


def rotation_to_north(eta) -> np.ndarray:
    """Deterministic rotation ``g`` with ``g @ e_d = eta``.

    Built from two Householder reflections; the reflection vector is chosen
    away from cancellation so the construction is stable near both poles.
    """
    eta = np.asarray(eta, dtype=float)
    d = eta.size
    e = north_pole(d)
    flip = np.ones(d)
    if eta[-1] >= 0:
        # H maps e_d to -eta; flipping e_d first restores the sign.
        h = _householder(e + eta)
        flip[-1] = -1.0
    else:
        h = _householder(e - eta)
        flip[0] = -1.0
    return h * flip


def rotations_to_north(etas) -> np.ndarray:
    """Vectorized :func:`rotation_to_north` for ``(P, d)`` points."""
    etas = np.asarray(etas, dtype=float)
    P, d = etas.shape
    e = north_pole(d)
    pos = etas[:, -1] >= 0
    v = np.where(pos[:, None], e + etas, e - etas)
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    h = np.eye(d)[None] - 2.0 * v[:, :, None] * v[:, None, :]
    flip = np.ones((P, d))
    flip[pos, -1] = -1.0
    flip[~pos, 0] = -1.0
    return h * flip[:, None, :]


def apply_rotations_to_north(etas, vecs) -> np.ndarray:
    """``g_eta @ v`` for all ``(eta, v)`` pairs without forming the matrices.

    `etas` is ``(E, d)``, `vecs` is ``(R, d)`` (real or complex); the result
    has shape ``(E, R, d)`` and agrees with :func:`rotation_to_north`.
    """
    etas = np.asarray(etas, dtype=float)
    vecs = np.asarray(vecs)
    E, d = etas.shape
    e = north_pole(d)
    pos = etas[:, -1] >= 0
    u = np.where(pos[:, None], e + etas, e - etas)
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    flip = np.ones((E, d))
    flip[pos, -1] = -1.0
    flip[~pos, 0] = -1.0
    fv = flip[:, None, :] * vecs[None, :, :]
    dots = np.einsum("ed,erd->er", u, fv)
    return fv - 2.0 * dots[:, :, None] * u[:, None, :]


def so2_rotation(gamma: float, d: int = 3) -> np.ndarray:
    """Positive rotation by `gamma` in the ``(x_1, x_2)``-plane."""
    g = np.eye(d)
    c, s = np.cos(gamma), np.sin(gamma)
    g[0, 0], g[0, 1], g[1, 0], g[1, 1] = c, -s, s, c
    return g


def embed_rotation(h: np.ndarray, d: int) -> np.ndarray:
    """Embed a rotation of R^m into SO(d), fixing ``e_{m+1}, ..., e_d``."""
    m = h.shape[-1]
    g = np.zeros(h.shape[:-2] + (d, d))
    g[..., :m, :m] = h
    for i in range(m, d):
        g[..., i, i] = 1.0
    return g


def check_rotation(g: np.ndarray, tol: float = 1e-12) -> bool:
    g = np.asarray(g, dtype=float)
    d = g.shape[-1]
    ortho = np.max(np.abs(g.T @ g - np.eye(d))) <= tol
    return bool(ortho and abs(np.linalg.det(g) - 1.0) <= tol)


def geodesic_dist(a, b) -> np.ndarray:
    dot = np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=-1)
    return np.arccos(np.clip(dot, -1.0, 1.0))


def random_points(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
