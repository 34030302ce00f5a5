"""Harmonic expansions of band-limited functions."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Mapping

import numpy as np

from .quadrature import sphere_rule
from .sphere import HarmonicIndex, enumerate_indices, index_table
from .specfun import _validate_chain, dim_poly
from .transform import ProductGridTransform, from_padded, harmonic_matrix, to_padded

__all__ = ["CoefficientVector", "flat_position", "project_function"]


@lru_cache(maxsize=512)
def _degree_ranks(d: int, n: int) -> dict:
    return {idx.k: i for i, idx in enumerate(enumerate_indices(d, n))}


def flat_position(d: int, n: int, k) -> int:
    """Position of ``(n, k)`` in the lexicographic flat layout."""
    chain = _validate_chain(d, n, k)
    offset = dim_poly(d, n - 1) if n > 0 else 0
    return offset + _degree_ranks(d, n)[chain[1:]]


class CoefficientVector:
    """Coefficients ``<f, Y_k^{d,n}>`` of a function of degree at most `max_degree`.

    Values are stored densely in the lexicographic order of
    :func:`spherewave.sphere.index_table`; indices without an entry are zero.
    """

    __slots__ = ("d", "max_degree", "values")

    def __init__(self, d: int, max_degree: int, values=None):
        if d < 3 or max_degree < 0:
            raise ValueError("need d >= 3 and max_degree >= 0")
        size = dim_poly(d, max_degree)
        if values is None:
            values = np.zeros(size, dtype=complex)
        values = np.array(values, dtype=complex)
        if values.shape != (size,):
            raise ValueError(f"expected {size} coefficients, got shape {values.shape}")
        self.d = d
        self.max_degree = max_degree
        self.values = values

    @classmethod
    def from_entries(cls, d: int, max_degree: int, entries: Mapping) -> "CoefficientVector":
        out = cls(d, max_degree)
        for key, val in entries.items():
            out[key] = val
        return out

    @classmethod
    def from_padded(cls, d: int, max_degree: int, padded) -> "CoefficientVector":
        return cls(d, max_degree, from_padded(d, max_degree, padded))

    @classmethod
    def basis(cls, d: int, n: int, k, max_degree: int | None = None) -> "CoefficientVector":
        out = cls(d, n if max_degree is None else max_degree)
        out[(n,) + tuple(k)] = 1.0
        return out

    def _pos(self, key) -> int:
        if isinstance(key, HarmonicIndex):
            if key.d != self.d:
                raise IndexError("index dimension mismatch")
            n, k = key.n, key.k
        else:
            n, k = key[0], tuple(key[1:])
        if n > self.max_degree:
            raise IndexError(f"degree {n} exceeds max_degree {self.max_degree}")
        return flat_position(self.d, n, k)

    def __getitem__(self, key) -> complex:
        return complex(self.values[self._pos(key)])

    def __setitem__(self, key, value) -> None:
        self.values[self._pos(key)] = value

    def entries(self) -> Iterator[tuple]:
        """Nonzero entries as ``(HarmonicIndex, value)`` pairs."""
        idx = index_table(self.d, self.max_degree)
        for i in np.flatnonzero(self.values):
            row = idx[i]
            yield HarmonicIndex(self.d, int(row[0]), tuple(int(v) for v in row[1:])), complex(self.values[i])

    def copy(self) -> "CoefficientVector":
        return CoefficientVector(self.d, self.max_degree, self.values.copy())

    def resized(self, max_degree: int) -> "CoefficientVector":
        """Truncate or zero-extend to another maximal degree."""
        size = dim_poly(self.d, max_degree)
        vals = np.zeros(size, dtype=complex)
        m = min(size, self.values.size)
        vals[:m] = self.values[:m]
        return CoefficientVector(self.d, max_degree, vals)

    def degree_norms(self) -> np.ndarray:
        """L2 norm of each homogeneous degree component."""
        n = index_table(self.d, self.max_degree)[:, 0]
        return np.sqrt(np.bincount(n, weights=np.abs(self.values) ** 2, minlength=self.max_degree + 1))

    def effective_degree(self, tol: float = 0.0) -> int:
        nz = np.flatnonzero(self.degree_norms() > tol)
        return int(nz[-1]) if nz.size else 0

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def padded(self, max_degree: int | None = None) -> np.ndarray:
        v = self if max_degree is None else self.resized(max_degree)
        return to_padded(self.d, v.max_degree, v.values)

    def evaluate(self, points) -> np.ndarray:
        """Pointwise values at cartesian `points` of shape ``(P, d)``."""
        points = np.atleast_2d(points)
        out = np.empty(points.shape[0], dtype=complex)
        step = max(1, 200000 // max(1, self.values.size))
        for s in range(0, points.shape[0], step):
            out[s : s + step] = harmonic_matrix(self.d, self.max_degree, points[s : s + step]) @ self.values
        return out

    def _coerce(self, other: "CoefficientVector"):
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        D = max(self.max_degree, other.max_degree)
        return self.resized(D).values, other.resized(D).values, D

    def __add__(self, other):
        a, b, D = self._coerce(other)
        return CoefficientVector(self.d, D, a + b)

    def __sub__(self, other):
        a, b, D = self._coerce(other)
        return CoefficientVector(self.d, D, a - b)

    def __mul__(self, scalar):
        return CoefficientVector(self.d, self.max_degree, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def max_abs_diff(self, other: "CoefficientVector") -> float:
        a, b, _ = self._coerce(other)
        return float(np.max(np.abs(a - b))) if a.size else 0.0

    def __repr__(self) -> str:
        return f"CoefficientVector(d={self.d}, max_degree={self.max_degree}, norm={self.norm():.6g})"


def project_function(f, d: int, degree: int, extra_degree: int | None = None) -> CoefficientVector:
    """Harmonic coefficients of ``f`` up to `degree` by product quadrature.

    `f` maps ``(P, d)`` points to values.  The projection is exact when `f`
    is a polynomial of degree at most `extra_degree` (default `degree`).
    """
    extra = degree if extra_degree is None else extra_degree
    rule = sphere_rule(d - 1, degree + extra)
    tr = ProductGridTransform(d, degree, rule)
    vals = np.asarray(f(rule.points), dtype=complex).reshape(-1, 1)
    return CoefficientVector.from_padded(d, degree, tr.analyze(vals)[..., 0])
