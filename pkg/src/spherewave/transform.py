"""Fast harmonic transforms on product grids.

Coefficients of a degree-D expansion are stored in a padded array with axes
``(n, k_1, ..., k_{d-3}, k_{d-2} + D)``; entries violating the index chain
are zero.  C-order over the valid entries reproduces the lexicographic flat
order of :func:`spherewave.sphere.index_table`, so flat vectors of lower
degree are prefixes of those of higher degree.

The basis factorizes over the angles, so synthesis on a product grid is a
sequence of small contractions, one per angle.  Each stage uses orthonormal
Gegenbauer polynomials from their three-term recurrence, multiplied by the
``sin^l`` factor before the recurrence starts, which keeps large orders free
of overflow.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .sphere import index_table

__all__ = [
    "pad_shape",
    "valid_mask",
    "to_padded",
    "from_padded",
    "stage_values",
    "harmonic_matrix",
    "ProductGridTransform",
]


def pad_shape(d: int, degree: int) -> tuple:
    return (degree + 1,) * (d - 2) + (2 * degree + 1,)


@lru_cache(maxsize=64)
def valid_mask(d: int, degree: int) -> np.ndarray:
    mask = np.zeros(pad_shape(d, degree), dtype=bool)
    idx = index_table(d, degree)
    idx[:, -1] += degree
    mask[tuple(idx.T)] = True
    mask.flags.writeable = False
    return mask


def to_padded(d: int, degree: int, flat: np.ndarray) -> np.ndarray:
    """Flat ``(M, ...)`` coefficients to the padded layout ``pad_shape + (...)``."""
    flat = np.asarray(flat)
    mask = valid_mask(d, degree)
    out = np.zeros(mask.shape + flat.shape[1:], dtype=np.result_type(flat.dtype, complex))
    out[mask] = flat
    return out


def from_padded(d: int, degree: int, padded: np.ndarray) -> np.ndarray:
    return padded[valid_mask(d, degree)]


def _stage_log_mass(d: int, j: int) -> float:
    # log of the integral of (1 - t^2)^((d - j - 3)/2) over [-1, 1]
    return 0.5 * math.log(math.pi) + gammaln((d - j - 1) / 2.0) - gammaln((d - j) / 2.0)


def _orthonormal_table(lam: float, m_max: int, t: np.ndarray, start: np.ndarray) -> np.ndarray:
    """``start * p_m(t)``, m <= m_max, for orthonormal Gegenbauer p_m of index lam."""
    out = np.empty(t.shape + (m_max + 1,))
    log_mu0 = 0.5 * math.log(math.pi) + gammaln(lam + 0.5) - gammaln(lam + 1.0)
    out[..., 0] = start * math.exp(-0.5 * log_mu0)
    if m_max == 0:
        return out
    m = np.arange(1, m_max + 1, dtype=float)
    b = np.sqrt(m * (m + 2 * lam - 1) / (4 * (m + lam) * (m + lam - 1)))
    out[..., 1] = t * out[..., 0] / b[0]
    for k in range(2, m_max + 1):
        out[..., k] = (t * out[..., k - 1] - b[k - 2] * out[..., k - 2]) / b[k - 1]
    return out


def stage_values(d: int, j: int, degree: int, t, s=None) -> np.ndarray:
    """Normalized one-angle factors of the basis.

    Returns ``S[..., a, l]`` (``0 <= l <= a <= degree``) equal to
    ``a_j(a, l) C_{a-l}^{(d-j-2)/2 + l}(t) s^l`` where ``s = sqrt(1 - t^2)``
    and ``a_j`` normalizes the factor on its own angle.  Products of these
    over the stages, times ``exp(i k_{d-2} t_1)``, give ``Y_k^{d,n}``.
    """
    t = np.asarray(t, dtype=float)
    if s is None:
        s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    out = np.zeros(t.shape + (degree + 1, degree + 1))
    scale = math.exp(0.5 * _stage_log_mass(d, j))
    base = (d - j - 2) / 2.0
    for l in range(degree + 1):
        start = scale * np.power(s, l)
        out[..., l:, l] = _orthonormal_table(base + l, degree - l, t, start)
    return out


def _stage_tables(d: int, degree: int, t_axes) -> list:
    """Stage tables ``T_j[node, k_j, k_{j+1}]`` (signed last index shifted by degree)."""
    tables = []
    for j in range(d - 2):
        S = stage_values(d, j, degree, t_axes[j])
        if j < d - 3:
            tables.append(np.ascontiguousarray(S))
        else:
            ks = np.abs(np.arange(-degree, degree + 1))
            tables.append(np.ascontiguousarray(S[:, :, ks]))
    return tables


def _point_factors(points: np.ndarray):
    """Cosines, sines and azimuth phase per stage for cartesian points."""
    x = np.asarray(points, dtype=float)
    d = x.shape[-1]
    r = np.sqrt(np.cumsum(x * x, axis=-1))
    ts, ss = [], []
    for j in range(d - 2):
        # stage j uses the polar angle t_{d-j-1}
        top = r[..., d - j - 1]
        safe = np.where(top > 0, top, 1.0)
        ts.append(np.where(top > 0, x[..., d - j - 1] / safe, 1.0))
        ss.append(np.where(top > 0, r[..., d - j - 2] / safe, 0.0))
    r2 = r[..., 1]
    safe = np.where(r2 > 0, r2, 1.0)
    phase = np.where(r2 > 0, (x[..., 1] + 1j * x[..., 0]) / safe, 1.0)
    return ts, ss, phase


def harmonic_matrix(d: int, degree: int, points) -> np.ndarray:
    """Dense ``(P, dim_poly)`` matrix of all ``Y_k^{d,n}`` at `points`."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    idx = index_table(d, degree)
    ts, ss, phase = _point_factors(points)
    out = np.ones((points.shape[0], idx.shape[0]), dtype=complex)
    for j in range(d - 2):
        S = stage_values(d, j, degree, ts[j], ss[j])
        out *= S[:, idx[:, j], np.abs(idx[:, j + 1])]
    kk = idx[:, -1]
    ang = np.angle(phase)
    out *= np.exp(1j * np.outer(ang, kk))
    return out


class ProductGridTransform:
    """Synthesis and analysis between padded coefficients and a product grid.

    Parameters
    ----------
    d : int
        Ambient dimension.
    degree : int
        Maximal harmonic degree of the coefficient arrays.
    rule : SphereRule
        Product rule on the (d-1)-sphere whose grid is used.

    Notes
    -----
    Arrays carry a trailing batch axis.  Grid values are ``(P, B)`` with P
    in the C order of ``rule.points``.  Both directions accept `rows`, a
    slice of the outermost grid axis, so large grids can be processed in
    blocks.
    """

    def __init__(self, d: int, degree: int, rule):
        if rule.m != d - 1:
            raise ValueError("rule lives on the wrong sphere")
        self.d = d
        self.degree = degree
        self.rule = rule
        self.tables = _stage_tables(d, degree, rule.axes[:-1])
        ks = np.arange(-degree, degree + 1)
        self.exp = np.exp(1j * np.outer(rule.axes[-1], ks))
        self.grid_shape = rule.grid_shape
        self.inner_size = int(np.prod(self.grid_shape[1:]))

    @property
    def n_outer(self) -> int:
        return self.grid_shape[0]

    def _table0(self, rows):
        return self.tables[0] if rows is None else self.tables[0][rows]

    def synthesize(self, coeffs: np.ndarray, rows: slice | None = None) -> np.ndarray:
        """Values ``(P_rows, B)`` of padded `coeffs` ``pad_shape + (B,)``."""
        shape = coeffs.shape
        X = np.asarray(coeffs, dtype=complex).reshape((1,) + shape)
        for j in range(self.d - 2):
            T = self._table0(rows) if j == 0 else self.tables[j]
            G, Ka, Kb = X.shape[:3]
            rest = X.shape[3:]
            R = int(np.prod(rest))
            ni = T.shape[0]
            Xp = np.ascontiguousarray(X.reshape(G, Ka, Kb, R).transpose(2, 1, 0, 3))
            Xp = Xp.reshape(Kb, Ka, G * R).view(float)
            Y = (T.transpose(2, 0, 1) @ Xp).view(complex)
            X = Y.reshape(Kb, ni, G, R).transpose(2, 1, 0, 3).reshape((G * ni, Kb) + rest)
        V = self.exp @ X
        return V.reshape(-1, shape[-1])

    def adjoint(self, values: np.ndarray, rows: slice | None = None) -> np.ndarray:
        """Adjoint of :meth:`synthesize` (no quadrature weights applied)."""
        B = values.shape[-1]
        n_az = self.exp.shape[0]
        X = np.asarray(values, dtype=complex).reshape(-1, n_az, B)
        X = self.exp.conj().T @ X
        counts = [self._table0(rows).shape[0]] + [self.tables[j].shape[0] for j in range(1, self.d - 2)]
        for j in range(self.d - 3, -1, -1):
            T = self._table0(rows) if j == 0 else self.tables[j]
            ni, Ka, Kb = T.shape
            Gp = int(np.prod(counts[:j]))
            R = X.size // (Gp * ni * Kb)
            Xp = np.ascontiguousarray(X.reshape(Gp, ni, Kb, R).transpose(2, 1, 0, 3))
            Xp = Xp.reshape(Kb, ni, Gp * R).view(float)
            Y = (T.transpose(2, 1, 0) @ Xp).view(complex)
            X = Y.reshape(Kb, Ka, Gp, R).transpose(2, 1, 0, 3).reshape(Gp, Ka, Kb * R)
        return X.reshape(pad_shape(self.d, self.degree) + (B,))

    def analyze(self, values: np.ndarray, rows: slice | None = None) -> np.ndarray:
        """Quadrature projection of grid values onto padded coefficients."""
        w = self.rule.weights.reshape(self.grid_shape[0], -1)
        if rows is not None:
            w = w[rows]
        return self.adjoint(values * w.reshape(-1, 1), rows)

