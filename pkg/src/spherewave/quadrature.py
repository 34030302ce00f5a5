"""Exact quadrature on [-1, 1], on spheres and on SO(2).

Sphere rules are tensor products: an equispaced rule in the azimuth and
Gauss-Gegenbauer rules in the remaining polar angles.  The Gauss rules come
from the Golub-Welsch eigenproblem, solved with an implicit-shift QL sweep
that only tracks the first eigenvector components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError
from .sphere import angles_to_cartesian, embed_rotation, rotation_to_north, so2_rotation

__all__ = [
    "ConvergenceError",
    "Rule1D",
    "SphereRule",
    "DirectionalRule",
    "gauss_gegenbauer",
    "sphere_rule",
    "so2_rule",
    "sphere_directional_rule",
    "trivial_directional_rule",
    "integrate",
]


@dataclass(frozen=True)
class Rule1D:
    """Gauss rule for the weight ``(1 - t^2)^alpha`` on ``[-1, 1]``."""

    nodes: np.ndarray
    weights: np.ndarray
    alpha: float
    exact_degree: int


def _tql_first_row(diag: np.ndarray, off: np.ndarray, max_sweeps: int = 60):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix."""
    n = diag.size
    d = diag.astype(float).copy()
    e = np.zeros(n)
    e[: n - 1] = off
    z = np.zeros(n)
    z[0] = 1.0
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


@lru_cache(maxsize=None)
def _gauss_gegenbauer_cached(alpha: float, n_nodes: int):
    k = np.arange(1, n_nodes, dtype=float)
    num = k * (k + 2 * alpha)
    den = (2 * k + 2 * alpha + 1) * (2 * k + 2 * alpha - 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        beta = np.where(den == 0, 0.5, num / np.where(den == 0, 1.0, den))
    mu0 = math.exp(0.5 * math.log(math.pi) + gammaln(alpha + 1) - gammaln(alpha + 1.5))
    nodes, z = _tql_first_row(np.zeros(n_nodes), np.sqrt(beta))
    order = np.argsort(nodes)
    nodes = nodes[order]
    weights = mu0 * z[order] ** 2
    # even weight: enforce exact mirror symmetry
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_gegenbauer(alpha: float, n_nodes: int) -> Rule1D:
    """Golub-Welsch rule with `n_nodes` nodes for the weight ``(1 - t^2)^alpha``."""
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    if n_nodes < 1:
        raise ValueError("need at least one node")
    nodes, weights = _gauss_gegenbauer_cached(float(alpha), int(n_nodes))
    return Rule1D(nodes, weights, float(alpha), 2 * n_nodes - 1)


@dataclass(frozen=True)
class SphereRule:
    """Product rule on the m-sphere in R^{m+1}, normalized to total weight 1.

    ``axes[i]`` holds the cosines of the polar angle ``t_{m-i}`` for
    ``i < m - 1`` and the azimuth angles ``t_1`` for the last entry.  Points
    are flattened in C order over ``axes`` (outermost polar angle first).
    """

    m: int
    exact_degree: int
    points: np.ndarray
    weights: np.ndarray
    axes: tuple = field(repr=False)
    axis_weights: tuple = field(repr=False)

    @property
    def grid_shape(self) -> tuple:
        return tuple(a.size for a in self.axes)

    def __len__(self) -> int:
        return self.weights.size


@lru_cache(maxsize=None)
def sphere_rule(m: int, degree: int) -> SphereRule:
    """Product rule on the m-sphere that is exact on polynomials of `degree`."""
    if m < 1 or degree < 0:
        raise ValueError("need m >= 1 and degree >= 0")
    n_az = degree + 1
    az = 2 * np.pi * np.arange(n_az) / n_az
    az_w = np.full(n_az, 1.0 / n_az)
    axes, axis_w = [], []
    for j in range(m, 1, -1):
        rule = gauss_gegenbauer((j - 2) / 2.0, degree // 2 + 1)
        axes.append(rule.nodes)
        axis_w.append(rule.weights / rule.weights.sum())
    axes.append(az)
    axis_w.append(az_w)
    grids = np.meshgrid(*axes, indexing="ij")
    angles = np.empty(grids[0].shape + (m,))
    angles[..., 0] = grids[-1]
    for i, j in enumerate(range(m, 1, -1)):
        angles[..., j - 1] = np.arccos(grids[i])
    points = angles_to_cartesian(angles).reshape(-1, m + 1)
    # polar nodes enter through arccos; rebuild the last coordinate exactly
    if m >= 2:
        points[:, -1] = grids[0].reshape(-1)
    weights = axis_w[0]
    for w in axis_w[1:]:
        weights = np.multiply.outer(weights, w)
    weights = np.asarray(weights).reshape(-1)
    for arr in (points, weights):
        arr.flags.writeable = False
    return SphereRule(m, degree, points, weights, tuple(axes), tuple(axis_w))


@dataclass(frozen=True)
class DirectionalRule:
    """Nodes on the stabilizer of the north pole with weights summing to 1.

    ``rotations`` are d x d matrices fixing ``e_d``.  `kind` is ``"so2"``
    (d = 3 plane rotations), ``"sphere"`` (rotations ``g`` with
    ``g e_{d-1} = (eta_hat, 0)`` for ``eta_hat`` from a rule on the
    (d-2)-sphere) or ``"trivial"`` (the identity alone).
    """

    kind: str
    rotations: np.ndarray
    weights: np.ndarray
    exact_degree: int
    angles: np.ndarray | None = None
    sphere: SphereRule | None = None

    def __len__(self) -> int:
        return self.weights.size


@lru_cache(maxsize=None)
def so2_rule(K: int) -> DirectionalRule:
    """``2K + 1`` equispaced plane rotations; exact on trigonometric degree 2K."""
    if K < 0:
        raise ValueError("K must be non-negative")
    M = 2 * K + 1
    gam = 2 * np.pi * np.arange(M) / M
    rots = np.stack([so2_rotation(g) for g in gam])
    return DirectionalRule("so2", rots, np.full(M, 1.0 / M), 2 * K, angles=gam)


@lru_cache(maxsize=None)
def sphere_directional_rule(d: int, degree: int) -> DirectionalRule:
    """Rotations ``g_{eta_hat}`` for a degree-`degree` rule on the (d-2)-sphere."""
    if d < 4:
        raise ValueError("sphere directional rules need d >= 4")
    rule = sphere_rule(d - 2, degree)
    rots = np.stack([embed_rotation(rotation_to_north(p), d) for p in rule.points])
    return DirectionalRule("sphere", rots, np.asarray(rule.weights), degree, sphere=rule)


def trivial_directional_rule(d: int) -> DirectionalRule:
    return DirectionalRule("trivial", np.eye(d)[None], np.ones(1), 0)


def integrate(rule, f: Callable) -> complex:
    """``sum_i w_i f(node_i)`` for any of the rule types."""
    if isinstance(rule, SphereRule):
        nodes = rule.points
    elif isinstance(rule, Rule1D):
        nodes = rule.nodes
    elif isinstance(rule, DirectionalRule):
        nodes = rule.angles if rule.kind == "so2" else rule.rotations
    else:
        raise TypeError(f"unknown rule type {type(rule).__name__}")
    vals = np.asarray(f(nodes))
    return complex(np.dot(rule.weights, vals)) if np.iscomplexobj(vals) else float(np.dot(rule.weights, vals))
