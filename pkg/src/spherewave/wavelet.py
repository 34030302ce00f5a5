"""Directional wavelets, scaling functions and directionality profiles.

A wavelet of bandwidth N has harmonic coefficients

    sqrt(dim H_n) * kappa(n / N) * zeta_n(k)

where the directionality table ``zeta_n`` has unit norm for every n >= 1,
involves only chains with ``k_1 <= K`` and stops depending on n once
``n >= K``.  For d >= 4 only tables living on chains ``(m, 0, ..., 0)`` are
supported; these wavelets are invariant under rotations fixing both
``e_{d-1}`` and ``e_d``.  For d = 3 the table is indexed by the single chain
entry ``k``.

Besides the plain harmonic sum, wavelets are evaluated through the
decomposition

    Psi(y) = sum_t <z_t, y>^{p_t} Q_t(y_d)

with fixed vectors ``z_t``.  For d = 3, ``z_k = e_2 + i sgn(k) e_1`` and
``p_k = |k|``; in the invariant case ``z = e_{d-1}`` and the powers come
from expanding ``r^m C_m^mu(b / r)`` in ``b = y_{d-1}`` and ``r^2 = 1 - y_d^2``.
The same decomposition drives the fast frame transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np
from scipy.special import gammaln

from .coeffs import CoefficientVector
from .errors import ConfigurationError
from .filters import FilterProfile
from .quadrature import gauss_gegenbauer
from .sphere import addition_kernel
from .specfun import dim_harmonic, gegenbauer_table, log_harmonic_norm_A

__all__ = [
    "DirectionalProfile",
    "zonal_profile",
    "optimal_profile",
    "d3_profile",
    "custom_profile",
    "WaveletSpec",
    "WaveletTerms",
    "wavelet_coeffs",
    "scaling_coeffs",
    "eval_wavelet",
    "psi_slice",
    "psi_grid",
    "wavelet_terms",
]

NORM_TOL = 1e-12


def _parity_order(K: int, n: int) -> int:
    """Largest order ``<= min(K, n)`` with the parity of K."""
    kn = min(K, n)
    return kn if (K - kn) % 2 == 0 else kn - 1


def _optimal_symmetric_table(d: int, kn: int) -> np.ndarray:
    lam = (d - 3) / 2.0
    out = np.zeros(kn + 1)
    pref = 0.5 * (gammaln(lam) - gammaln(2 * lam))
    for m in range(kn % 2, kn + 1, 2):
        log_sq = (
            gammaln(kn + 1.0)
            + math.log(m + lam)
            + gammaln(d + m - 3.0)
            - kn * math.log(2.0)
            - gammaln((kn - m) / 2 + 1.0)
            - gammaln(lam + (kn + m) / 2 + 1.0)
            - gammaln(m + 1.0)
        )
        out[m] = (-1) ** (m // 2) * math.exp(0.5 * log_sq + pref)
    return out


class DirectionalProfile:
    """Directionality table ``zeta_n`` for all degrees.

    Parameters
    ----------
    d : int
        Ambient dimension.
    K : int
        Directionality order.
    kind : str
        ``"zonal"``, ``"optimal"`` or ``"custom"``.
    tables : mapping, optional
        For ``"custom"``: degree -> {key: value}.  Keys are the chain entry k
        for d = 3 and the order m of chain ``(m, 0, ..., 0)`` for d >= 4.
        The table for the largest listed degree (which must be >= K) is
        reused for all higher degrees.
    convention : str
        For d = 3 ``"optimal"``: ``"binomial"`` (default) or ``"extremal"``.

    Notes
    -----
    Tables are validated on construction: unit norm for n >= 1, support in
    orders ``<= min(K, n)``, and independence of n for ``n >= K``.
    """

    def __init__(self, d: int, K: int, kind: str = "optimal", tables: Mapping | None = None,
                 convention: str = "binomial"):
        if d < 3:
            raise ValueError("dimension must be at least 3")
        if K < 0:
            raise ValueError("K must be non-negative")
        if kind not in ("zonal", "optimal", "custom"):
            raise ValueError(f"unknown profile kind {kind!r}")
        if kind == "zonal" and K != 0:
            raise ConfigurationError("zonal profiles have K = 0")
        if convention not in ("binomial", "extremal"):
            raise ValueError(f"unknown convention {convention!r}")
        self.d = d
        self.K = K
        self.kind = kind
        self.convention = convention
        self._custom = None
        self._cache: dict = {}
        if kind == "custom":
            if tables is None:
                raise ConfigurationError("custom profile needs tables")
            self._custom = {int(n): {int(k): complex(v) for k, v in t.items()} for n, t in tables.items()}
            self._validate_custom()

    @property
    def symmetric(self) -> bool:
        return self.d >= 4

    @property
    def n_stable(self) -> int:
        if self._custom is None:
            return max(self.K, 1)
        return max(self._custom)

    def label(self) -> str:
        if self.kind == "optimal" and self.d == 3 and self.convention != "binomial":
            return f"optimal-{self.convention}"
        return self.kind

    def _validate_custom(self) -> None:
        tabs = self._custom
        if not tabs:
            raise ConfigurationError("empty custom profile")
        n_max = max(tabs)
        if n_max < max(self.K, 1):
            raise ConfigurationError(f"custom tables must reach degree K={self.K}")
        ref = None
        for n in range(1, n_max + 1):
            if n not in tabs:
                raise ConfigurationError(f"custom table missing degree {n}")
            t = tabs[n]
            bound = min(self.K, n)
            for key in t:
                if self.d == 3 and abs(key) > bound:
                    raise ConfigurationError(f"degree {n}: |k|={abs(key)} exceeds min(K, n)={bound}")
                if self.d >= 4 and not 0 <= key <= bound:
                    raise ConfigurationError(f"degree {n}: order {key} outside [0, {bound}]")
            s = sum(abs(v) ** 2 for v in t.values())
            if abs(s - 1.0) > NORM_TOL:
                raise ConfigurationError(f"degree {n}: squared norm {s!r} differs from 1")
            if n >= self.K:
                clean = {k: v for k, v in t.items() if v != 0}
                if ref is None:
                    ref = clean
                elif clean.keys() != ref.keys() or any(abs(clean[k] - ref[k]) > NORM_TOL for k in ref):
                    raise ConfigurationError(f"degree {n}: table depends on n beyond K")

    def effective_order(self, n: int) -> int:
        """Order K_n of the table at degree n (optimal and zonal profiles)."""
        if self.kind == "zonal":
            return 0
        if self.kind == "custom":
            keys = [abs(k) for k, v in self.components(n).items() if v != 0]
            return max(keys) if keys else 0
        return _parity_order(self.K, n)

    def components(self, n: int) -> dict:
        """Nonzero table entries at degree n (empty for n = 0)."""
        if n <= 0:
            return {}
        if n in self._cache:
            return self._cache[n]
        if self.kind == "zonal":
            out = {0: 1.0}
        elif self.kind == "custom":
            out = self._custom[min(n, max(self._custom))]
        elif self.d >= 4:
            tab = _optimal_symmetric_table(self.d, _parity_order(self.K, n))
            out = {m: float(v) for m, v in enumerate(tab) if v != 0}
        else:
            kn = _parity_order(self.K, n)
            if self.convention == "binomial":
                out = {k: math.sqrt(math.comb(kn, (kn + k) // 2) / 2.0**kn) for k in range(-kn, kn + 1, 2)}
            else:
                out = {0: 1.0} if kn == 0 else {kn: math.sqrt(0.5), -kn: math.sqrt(0.5)}
        out = {k: v for k, v in out.items() if v != 0}
        self._cache[n] = out
        return out

    def is_real(self) -> bool:
        """Whether the induced wavelets are real valued."""
        for n in range(1, self.n_stable + 1):
            c = self.components(n)
            for k, v in c.items():
                if self.d >= 4:
                    if abs(complex(v).imag) > 0:
                        return False
                elif abs(c.get(-k, 0) - complex(v).conjugate()) > 1e-15:
                    return False
        return True

    def chain(self, key: int) -> tuple:
        return (key,) if self.d == 3 else (key,) + (0,) * (self.d - 3)

    def __repr__(self) -> str:
        return f"DirectionalProfile(d={self.d}, K={self.K}, kind={self.label()!r})"


def zonal_profile(d: int) -> DirectionalProfile:
    return DirectionalProfile(d, 0, "zonal")


def optimal_profile(d: int, K: int) -> DirectionalProfile:
    """Tables whose auto-correlation is ``<e_{d-1}, h e_{d-1}>^{K_n}`` (d >= 4).

    For degrees below K the order ``K_n`` is the largest value ``<= n``
    with the parity of K, which keeps the antipodal symmetry
    ``psi(t, phi + pi) = (-1)^K psi(t, phi)`` at every degree.
    """
    if d == 3:
        raise ConfigurationError("the optimal formula degenerates for d = 3; use d3_profile")
    return DirectionalProfile(d, K, "optimal")


def d3_profile(K: int, convention: str = "binomial") -> DirectionalProfile:
    """Directional tables for d = 3.

    ``"binomial"`` sets ``|zeta_k|^2 = 2^{-K_n} binom(K_n, (K_n + k)/2)`` so
    that the auto-correlation is ``cos(gamma)^{K_n}``; ``"extremal"`` puts
    equal weight on ``k = +-K_n``.
    """
    return DirectionalProfile(3, K, "optimal", convention=convention)


def custom_profile(d: int, K: int, tables: Mapping) -> DirectionalProfile:
    return DirectionalProfile(d, K, "custom", tables=tables)


@dataclass(frozen=True)
class WaveletSpec:
    """Directional wavelet of bandwidth N (scale j means ``N = 2^{j-1}``)."""

    d: int
    profile: DirectionalProfile
    filter: FilterProfile = field(default_factory=FilterProfile)
    N: float = 1.0

    def __post_init__(self):
        if self.profile.d != self.d:
            raise ConfigurationError("profile dimension does not match")
        if not self.N > 0:
            raise ValueError("bandwidth must be positive")

    @classmethod
    def at_scale(cls, d: int, profile: DirectionalProfile, filt: FilterProfile, j: int) -> "WaveletSpec":
        if j < 1:
            raise ValueError("wavelet scales start at j = 1")
        return cls(d, profile, filt, float(2 ** (j - 1)))

    @property
    def K(self) -> int:
        return self.profile.K

    @property
    def degrees(self) -> list:
        """Degrees with nonzero band-pass weight (strictly inside (N/2, 2N))."""
        top = int(math.ceil(2 * self.N)) - 1
        ns = np.arange(1, top + 1)
        k = np.asarray(self.filter.kappa(ns / self.N))
        return [int(n) for n in ns[k > 0]]

    @property
    def max_degree(self) -> int:
        deg = self.degrees
        return deg[-1] if deg else 0

    def kappa(self, n) -> np.ndarray:
        return np.asarray(self.filter.kappa(np.asarray(n, dtype=float) / self.N))

    def l2_norm_sq(self) -> float:
        """``sum_n dim H_n kappa(n/N)^2`` (the squared L2 norm)."""
        return float(sum(dim_harmonic(self.d, n) * self.kappa(n) ** 2 for n in self.degrees))


def wavelet_coeffs(spec: WaveletSpec) -> CoefficientVector:
    """Harmonic coefficients ``sqrt(dim H_n) kappa(n/N) zeta_n(k)``."""
    out = CoefficientVector(spec.d, spec.max_degree)
    for n in spec.degrees:
        amp = math.sqrt(dim_harmonic(spec.d, n)) * float(spec.kappa(n))
        for key, z in spec.profile.components(n).items():
            out[(n,) + spec.profile.chain(key)] = amp * z
    return out


def scaling_coeffs(filt: FilterProfile, d: int, j: int) -> CoefficientVector:
    """Coefficients ``phi(n/2^j)^2 conj(Y_k(e_d))`` of the scaling function."""
    if j < 0:
        raise ValueError("scale must be non-negative")
    top = max(2**j - 1, 0)
    out = CoefficientVector(d, top)
    for n in range(top + 1):
        # only the zero chain is nonzero at the pole, with value sqrt(dim)
        w = float(filt.phi(n / 2.0**j)) ** 2
        out[(n,) + (0,) * (d - 2)] = w * math.sqrt(dim_harmonic(d, n))
    return out


def _symmetric_power_coeff(m: int, i: int, mu: float) -> float:
    # coefficient of b^{m-2i} r^{2i} in r^m C_m^mu(b / r)
    return (-1) ** i * math.exp(
        gammaln(m - i + mu) - gammaln(mu) - gammaln(i + 1.0) - gammaln(m - 2 * i + 1.0)
    ) * 2.0 ** (m - 2 * i)


@dataclass
class _Block:
    term: int
    m: int
    power: int
    lam: float
    coef: np.ndarray  # indexed by n - m


class WaveletTerms:
    """Decomposition ``Psi(y) = sum_t <z_t, y>^{p_t} Q_t(y_d)`` of one wavelet."""

    def __init__(self, spec: WaveletSpec):
        self.spec = spec
        d = spec.d
        self.d = d
        self.max_degree = spec.max_degree
        prof = spec.profile
        D = self.max_degree
        keys = sorted({k for n in spec.degrees for k in prof.components(n)})
        blocks: list[_Block] = []
        if d == 3:
            self.keys = keys
            z = np.zeros((len(keys), 3), dtype=complex)
            for t, k in enumerate(keys):
                if k != 0:
                    z[t] = [1j * np.sign(k), 1.0, 0.0]
            self.z = z
            self.p = np.array([abs(k) for k in keys], dtype=int)
            for t, k in enumerate(keys):
                m = abs(k)
                coef = np.zeros(D - m + 1, dtype=complex)
                for n in spec.degrees:
                    zeta = prof.components(n).get(k, 0)
                    if zeta != 0:
                        coef[n - m] = (
                            math.sqrt(dim_harmonic(d, n)) * float(spec.kappa(n)) * zeta
                            * math.exp(log_harmonic_norm_A(d, n, (k,)))
                        )
                blocks.append(_Block(t, m, 0, 0.5 + m, coef))
        else:
            mu = (d - 3) / 2.0
            ps = sorted({m - 2 * i for m in keys for i in range(m // 2 + 1)})
            self.keys = ps
            pos = {p: t for t, p in enumerate(ps)}
            e = np.zeros(d)
            e[d - 2] = 1.0
            self.z = np.tile(e, (len(ps), 1)).astype(complex)
            self.p = np.array(ps, dtype=int)
            for m in keys:
                base = np.zeros(D - m + 1, dtype=complex)
                for n in spec.degrees:
                    phi_m = prof.components(n).get(m, 0)
                    if phi_m != 0:
                        base[n - m] = (
                            math.sqrt(dim_harmonic(d, n)) * float(spec.kappa(n)) * phi_m
                            * math.exp(log_harmonic_norm_A(d, n, prof.chain(m)))
                        )
                for i in range(m // 2 + 1):
                    c = _symmetric_power_coeff(m, i, mu)
                    blocks.append(_Block(pos[m - 2 * i], m, i, (d - 2) / 2.0 + m, base * c))
        self.blocks = blocks

    @property
    def n_terms(self) -> int:
        return len(self.p)

    @property
    def is_real(self) -> bool:
        return self.d >= 4 and all(np.isrealobj(b.coef) or not np.any(b.coef.imag) for b in self.blocks)

    def Q(self, a) -> np.ndarray:
        """Radial factors ``Q_t(a)``, shape ``a.shape + (T,)``."""
        a = np.asarray(a, dtype=float)
        out = np.zeros(a.shape + (self.n_terms,), dtype=complex)
        tables: dict = {}
        for b in self.blocks:
            if not np.any(b.coef):
                continue
            key = b.m
            if key not in tables:
                tables[key] = gegenbauer_table(b.lam, self.max_degree - b.m, np.clip(a, -1.0, 1.0))
            val = tables[key] @ b.coef
            if b.power:
                val = val * (1.0 - a * a) ** b.power
            out[..., b.term] += val
        return out

    def evaluate(self, points) -> np.ndarray:
        """Values at cartesian `points` ``(P, d)``."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        Q = self.Q(points[:, -1])
        lin = points @ self.z.T
        return np.sum(lin ** self.p * Q, axis=-1)

    @cached_property
    def multipliers(self) -> np.ndarray:
        """``q[t, n] = (1/dim H_n) int Q_t Z_n dnu`` with the normalized weight
        ``(1 - a^2)^{(d-3)/2}``; Funk-Hecke multipliers of ``Q_t(<eta, .>)``."""
        d, D = self.d, self.max_degree
        rule = gauss_gegenbauer((d - 3) / 2.0, D + 1)
        w = rule.weights / rule.weights.sum()
        Qv = self.Q(rule.nodes)
        out = np.zeros((self.n_terms, D + 1), dtype=complex)
        for n in range(D + 1):
            Z = addition_kernel(d, n, rule.nodes)
            out[:, n] = (w * Z) @ Qv / dim_harmonic(d, n)
        return out


_TERMS_CACHE: dict = {}


def wavelet_terms(spec: WaveletSpec) -> WaveletTerms:
    key = (spec.d, id(spec.profile), spec.filter, spec.N)
    hit = _TERMS_CACHE.get(key)
    if hit is None or hit.spec.profile is not spec.profile:
        hit = WaveletTerms(spec)
        _TERMS_CACHE[key] = hit
    return hit


def eval_wavelet(spec: WaveletSpec, g, points, method: str = "closed") -> np.ndarray:
    """Values of ``T(g) Psi`` at `points`, i.e. ``Psi(g^{-1} x)``.

    ``method="closed"`` uses the term decomposition; ``"sum"`` sums the
    harmonic coefficients against the basis.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    pulled = points if g is None else points @ np.asarray(g, dtype=float)
    if method == "closed":
        return wavelet_terms(spec).evaluate(pulled)
    if method == "sum":
        return wavelet_coeffs(spec).evaluate(pulled)
    raise ValueError(f"unknown method {method!r}")


def _slice_radial(spec: WaveletSpec, t) -> tuple:
    """``R[..., key]`` with ``psi = sum_key R_key(t) * angular_key(phi)``."""
    t = np.asarray(t, dtype=float)
    d = spec.d
    prof = spec.profile
    keys = sorted({k for n in spec.degrees for k in prof.components(n)})
    ct, st = np.cos(t), np.sin(t)
    R = np.zeros(t.shape + (len(keys),), dtype=complex)
    D = spec.max_degree
    for i, key in enumerate(keys):
        m = abs(key)
        coef = np.zeros(D - m + 1, dtype=complex)
        for n in spec.degrees:
            z = prof.components(n).get(key, 0)
            if z != 0:
                coef[n - m] = (
                    math.sqrt(dim_harmonic(d, n)) * float(spec.kappa(n)) * z
                    * math.exp(log_harmonic_norm_A(d, n, prof.chain(key)))
                )
        G = gegenbauer_table((d - 2) / 2.0 + m, D - m, ct)
        R[..., i] = (G @ coef) * st**m
    return keys, R


def _slice_angular(spec: WaveletSpec, keys, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if spec.d == 3:
        return np.exp(1j * np.multiply.outer(phi, np.array(keys, dtype=float)))
    mu = (spec.d - 3) / 2.0
    tab = gegenbauer_table(mu, max(keys) if keys else 0, np.cos(phi))
    return tab[..., list(keys)]


def _maybe_real(spec: WaveletSpec, vals: np.ndarray) -> np.ndarray:
    return vals.real.copy() if spec.profile.is_real() else vals


def psi_slice(spec: WaveletSpec, t, phi) -> np.ndarray:
    """``Psi(cos t e_d + sin t (cos phi e_{d-1} + sin phi eta))``.

    The value does not depend on the unit vector ``eta`` orthogonal to
    ``e_{d-1}`` and ``e_d``.  `t` and `phi` broadcast; the result is real
    when the wavelet is real valued.
    """
    t, phi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(phi, dtype=float))
    keys, R = _slice_radial(spec, t)
    A = _slice_angular(spec, keys, phi)
    return _maybe_real(spec, np.sum(R * A, axis=-1))


def psi_grid(spec: WaveletSpec, t, phi) -> np.ndarray:
    """``psi_slice`` on the tensor grid ``t x phi``, shape ``(len(t), len(phi))``."""
    keys, R = _slice_radial(spec, np.asarray(t, dtype=float))
    A = _slice_angular(spec, keys, np.asarray(phi, dtype=float))
    return _maybe_real(spec, R @ A.T)
