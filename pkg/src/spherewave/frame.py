"""Discrete tight frames of directional wavelets: analysis and synthesis.

Atoms at scale j >= 1 are ``sqrt(omega_l mu_m) T(g_{eta_l} h_m) Psi^j`` where
``(eta_l, omega_l)`` is a product sphere rule of degree ``2^{j+1}`` and
``(h_m, mu_m)`` a directional rule; scale 0 holds the constant function.

Analysis is spectral.  With the decomposition
``Psi(y) = sum_t <z_t, y>^{p_t} Q_t(y_d)`` and the multinomial expansion
of ``<g z_t, x>^{p_t}``, every coefficient becomes

    <f, T(g) Psi> = sum_t sum_{|a| = p_t} (p_t! / a!) conj((g z_t)^a)
                        sum_n conj(q_{t,n}) P_n(f x^a)(g e_d)

where ``P_n`` projects onto degree n and ``q_{t,n}`` are Funk-Hecke
multipliers of ``Q_t``.  The inner sums are separable transforms evaluated
on the product grid of sphere nodes; only the short sums over ``a`` depend
on the directional rotation.  Synthesis applies the exact adjoint of each
step.  :func:`analyze_direct` computes the same numbers by pulling back
quadrature points for every atom and serves as an independent check.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .coeffs import CoefficientVector
from .errors import ConfigurationError, TruncationError
from .filters import FilterProfile
from .quadrature import (
    DirectionalRule,
    SphereRule,
    so2_rule,
    sphere_directional_rule,
    sphere_rule,
    trivial_directional_rule,
)
from .sphere import apply_rotations_to_north, index_table, rotation_to_north, rotations_to_north
from .specfun import dim_poly
from .transform import ProductGridTransform, from_padded, pad_shape, to_padded
from .wavelet import (
    DirectionalProfile,
    WaveletSpec,
    d3_profile,
    optimal_profile,
    wavelet_coeffs,
    wavelet_terms,
    zonal_profile,
)

__all__ = [
    "FrameScale",
    "Frame",
    "FrameCoefficients",
    "build_frame",
    "default_profile",
    "analyze",
    "analyze_batch",
    "synthesize",
    "synthesize_batch",
    "analyze_direct",
    "atom_coefficients_direct",
    "parseval_gap",
    "parseval_gaps",
    "lambda_operator",
    "lambda_operator_batch",
    "worker_count",
]

_BLOCK_BUDGET = 6_000_000  # complex entries per block


def worker_count() -> int:
    """Worker threads, capped by ``SPHEREWAVE_THREADS`` (default 1)."""
    raw = os.environ.get("SPHEREWAVE_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"SPHEREWAVE_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _map_ordered(fn, items: Sequence):
    """Yield ``fn(x)`` for `items` in order, threaded in waves of the worker count."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        for x in items:
            yield fn(x)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for s in range(0, len(items), workers):
            yield from pool.map(fn, items[s : s + workers])


@dataclass(frozen=True)
class FrameScale:
    """Node sets of one scale; atom ``i = l * r + m`` pairs node l with direction m."""

    j: int
    spec: WaveletSpec | None
    sphere: SphereRule | None
    directions: DirectionalRule | None
    eta_weights: np.ndarray = field(repr=False, default=None)
    dir_weights: np.ndarray = field(repr=False, default=None)

    @property
    def s(self) -> int:
        return 1 if self.sphere is None else len(self.sphere)

    @property
    def r(self) -> int:
        return 1 if self.directions is None else len(self.directions)

    @property
    def n_atoms(self) -> int:
        return self.s * self.r

    def atom_weights(self) -> np.ndarray:
        if self.sphere is None:
            return np.ones(1)
        return np.outer(self.eta_weights, self.dir_weights).reshape(-1)

    def atom_rotation(self, i: int) -> np.ndarray:
        if self.sphere is None:
            raise IndexError("the constant atom has no rotation")
        if not 0 <= i < self.n_atoms:
            raise IndexError(f"atom {i} out of range at scale {self.j}")
        l, m = divmod(i, self.r)
        return rotation_to_north(self.sphere.points[l]) @ self.directions.rotations[m]

    def rotations(self) -> np.ndarray:
        """All atom rotations ``(n_atoms, d, d)`` (for small frames)."""
        g = rotations_to_north(np.asarray(self.sphere.points))
        return np.einsum("lab,mbc->lmac", g, self.directions.rotations).reshape(-1, g.shape[1], g.shape[2])


@dataclass(frozen=True)
class Frame:
    d: int
    K: int
    J_max: int
    filter: FilterProfile
    profile: DirectionalProfile
    scales: tuple

    @property
    def n_atoms(self) -> int:
        return sum(sc.n_atoms for sc in self.scales)

    @property
    def max_degree(self) -> int:
        """Largest harmonic degree carried by any atom."""
        return max([0] + [sc.spec.max_degree for sc in self.scales[1:]])

    @property
    def exact_degree(self) -> int:
        """Signals of degree up to this value satisfy the tight-frame identity."""
        return 2 ** (self.J_max - 1) if self.J_max >= 1 else 0

    def with_weights(self, j: int, eta_weights=None, dir_weights=None) -> "Frame":
        """Copy with replaced node weights at scale j (for negative controls)."""
        sc = self.scales[j]
        new = replace(
            sc,
            eta_weights=sc.eta_weights if eta_weights is None else np.asarray(eta_weights, float),
            dir_weights=sc.dir_weights if dir_weights is None else np.asarray(dir_weights, float),
        )
        scales = list(self.scales)
        scales[j] = new
        return replace(self, scales=tuple(scales))

    @cached_property
    def _engine(self) -> "_Engine":
        return _Engine(self)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


def default_profile(d: int, K: int) -> DirectionalProfile:
    if K == 0:
        return zonal_profile(d)
    return d3_profile(K) if d == 3 else optimal_profile(d, K)


def _directional_rule(d: int, profile: DirectionalProfile, j: int) -> DirectionalRule:
    if profile.kind == "zonal":
        return trivial_directional_rule(d)
    kj = min(profile.K, 2**j)
    if d == 3:
        return so2_rule(kj)
    return sphere_directional_rule(d, 2 * kj)


def build_frame(
    d: int,
    K: int,
    J_max: int,
    filt: FilterProfile | None = None,
    profile: DirectionalProfile | None = None,
) -> Frame:
    """Assemble the frame with scales ``0..J_max``.

    Raises
    ------
    ConfigurationError
        If the profile does not match ``d`` or ``K``.
    """
    if d < 3:
        raise ValueError("dimension must be at least 3")
    if J_max < 0 or K < 0:
        raise ValueError("need J_max >= 0 and K >= 0")
    filt = FilterProfile() if filt is None else filt
    profile = default_profile(d, K) if profile is None else profile
    if profile.d != d:
        raise ConfigurationError(f"profile built for d={profile.d}, frame needs d={d}")
    if profile.K != K:
        raise ConfigurationError(f"profile has K={profile.K}, frame needs K={K}")
    scales = [FrameScale(0, None, None, None, np.ones(1), np.ones(1))]
    for j in range(1, J_max + 1):
        rule = sphere_rule(d - 1, 2 ** (j + 1))
        dirs = _directional_rule(d, profile, j)
        spec = WaveletSpec.at_scale(d, profile, filt, j)
        scales.append(FrameScale(j, spec, rule, dirs, np.asarray(rule.weights), np.asarray(dirs.weights)))
    return Frame(d, K, J_max, filt, profile, tuple(scales))


@dataclass
class FrameCoefficients:
    """Frame coefficients per scale; ``scales[j]`` has shape ``(n_atoms_j, B)``."""

    d: int
    J_max: int
    scales: list

    @property
    def batch(self) -> int:
        return self.scales[0].shape[1]

    def __getitem__(self, key):
        j, i = key
        if not 0 <= j < len(self.scales):
            raise IndexError(f"scale {j} out of range")
        arr = self.scales[j]
        if not 0 <= i < arr.shape[0]:
            raise IndexError(f"atom {i} out of range at scale {j}")
        row = arr[i]
        return complex(row[0]) if row.size == 1 else row.copy()

    def column(self, b: int) -> "FrameCoefficients":
        return FrameCoefficients(self.d, self.J_max, [a[:, b : b + 1].copy() for a in self.scales])

    def energy(self) -> np.ndarray:
        """``sum |c|^2`` per batch column."""
        return sum(np.sum(np.abs(a) ** 2, axis=0) for a in self.scales)

    def entries(self):
        for j, a in enumerate(self.scales):
            for i in np.flatnonzero(np.any(a != 0, axis=1)):
                yield j, int(i), a[i]

    def zeros_like(self) -> "FrameCoefficients":
        return FrameCoefficients(self.d, self.J_max, [np.zeros_like(a) for a in self.scales])

    def only_scales(self, keep: Iterable[int]) -> "FrameCoefficients":
        keep = set(keep)
        return FrameCoefficients(
            self.d, self.J_max, [a.copy() if j in keep else np.zeros_like(a) for j, a in enumerate(self.scales)]
        )

    def __add__(self, other):
        return FrameCoefficients(self.d, self.J_max, [a + b for a, b in zip(self.scales, other.scales)])

    def __mul__(self, s):
        return FrameCoefficients(self.d, self.J_max, [a * s for a in self.scales])

    __rmul__ = __mul__


def _multi_indices(d: int, p: int) -> list:
    if d == 1:
        return [(p,)]
    out = []
    for first in range(p, -1, -1):
        for rest in _multi_indices(d - 1, p - first):
            out.append((first,) + rest)
    return out


def _monomials(points: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    out = np.ones((points.shape[0], alphas.shape[0]))
    for i in range(points.shape[1]):
        out *= points[:, i : i + 1] ** alphas[None, :, i]
    return out


def _truncate_padded(arr: np.ndarray, d: int, L: int, Lj: int) -> np.ndarray:
    sl = [slice(0, Lj + 1)] * (d - 2) + [slice(L - Lj, L + Lj + 1)]
    return arr[tuple(sl)]


class _ScalePlan:
    """Per-scale data of the spectral engine."""

    def __init__(self, frame: Frame, j: int, alpha_pos: dict, alphas: np.ndarray):
        sc = frame.scales[j]
        self.scale = sc
        self.d = frame.d
        terms = wavelet_terms(sc.spec)
        self.terms = terms
        self.Dj = terms.max_degree
        self.q = terms.multipliers
        cols_t, cols_a = [], []
        for t, p in enumerate(terms.p):
            for a in _multi_indices(frame.d, int(p)):
                cols_t.append(t)
                cols_a.append(alpha_pos[a])
        self.cols_t = np.array(cols_t, dtype=int)
        self.cols_a = np.array(cols_a, dtype=int)
        al = alphas[self.cols_a]
        p = al.sum(axis=1)
        self.multinom = np.array(
            [math.factorial(int(pp)) / math.prod(math.factorial(int(v)) for v in row) for pp, row in zip(p, al)]
        )
        # terms sharing a vector z share their monomials (x^a built by recursion)
        zs, group_of = [], []
        for t in range(terms.n_terms):
            for g, z in enumerate(zs):
                if np.array_equal(z, terms.z[t]):
                    group_of.append(g)
                    break
            else:
                zs.append(terms.z[t])
                group_of.append(len(zs) - 1)
        gp = [0] * len(zs)
        for t, g in enumerate(group_of):
            gp[g] = max(gp[g], int(terms.p[t]))
        parents, vars_, groups, row_of = [], [], [], {}
        for g, pm in enumerate(gp):
            for p_ in range(pm + 1):
                for a in _multi_indices(frame.d, p_):
                    row_of[(g, a)] = len(parents)
                    groups.append(g)
                    if p_ == 0:
                        parents.append(-1)
                        vars_.append(-1)
                    else:
                        i = next(k for k, v in enumerate(a) if v > 0)
                        prev = a[:i] + (a[i] - 1,) + a[i + 1 :]
                        parents.append(row_of[(g, prev)])
                        vars_.append(i)
        self._mono_plan = list(zip(parents, vars_, groups))
        self.col_rows = np.array(
            [row_of[(group_of[t], tuple(int(v) for v in row))] for t, row in zip(self.cols_t, al)], dtype=int
        )
        rots = sc.directions.rotations
        self.hz = np.einsum("mab,gb->mga", rots, np.array(zs).reshape(-1, frame.d))
        if not np.any(np.imag(self.hz)):
            self.hz = np.real(self.hz)
        self.sqrt_eta = np.sqrt(sc.eta_weights)
        self.sqrt_dir = np.sqrt(sc.dir_weights)
        self._transforms: dict = {}

    @property
    def n_cols(self) -> int:
        return self.cols_t.size

    def transform(self, L: int) -> ProductGridTransform:
        tr = self._transforms.get(L)
        if tr is None:
            tr = ProductGridTransform(self.d, L, self.scale.sphere)
            self._transforms[L] = tr
        return tr

    def row_blocks(self, tr: ProductGridTransform, batch: int) -> list:
        r = self.scale.r
        per_row = tr.inner_size * max(1, r * self.n_cols + 2 * self.n_cols * batch + r * batch)
        step = max(1, _BLOCK_BUDGET // per_row)
        return [slice(a, min(a + step, tr.n_outer)) for a in range(0, tr.n_outer, step)]

    def eta_slice(self, tr: ProductGridTransform, rows: slice) -> slice:
        return slice(rows.start * tr.inner_size, rows.stop * tr.inner_size)

    def mixing(self, etas: np.ndarray) -> np.ndarray:
        """``M[e, m, c] = multinom_c * conj((g_e h_m z_{t_c})^{a_c})``."""
        r, G, d = self.hz.shape
        E = len(etas)
        w = apply_rotations_to_north(etas, self.hz.reshape(r * G, d)).reshape(E, r, G, d)
        w = np.ascontiguousarray(np.conj(w).transpose(2, 3, 0, 1))
        rows = np.empty((len(self._mono_plan), E, r), dtype=w.dtype)
        for k, (parent, var, g) in enumerate(self._mono_plan):
            if parent < 0:
                rows[k] = 1.0
            else:
                np.multiply(rows[parent], w[g, var], out=rows[k])
        M = rows[self.col_rows]
        M *= self.multinom[:, None, None]
        return M.transpose(1, 2, 0)


class _Engine:
    def __init__(self, frame: Frame):
        self.frame = frame
        self.d = frame.d
        ps = set()
        for sc in frame.scales[1:]:
            ps.update(int(p) for p in wavelet_terms(sc.spec).p)
        alist = []
        for p in sorted(ps):
            alist.extend(_multi_indices(frame.d, p))
        self.alphas = np.array(alist, dtype=int).reshape(-1, frame.d)
        self.alpha_pos = {a: i for i, a in enumerate(alist)}
        self.pmax = max(ps) if ps else 0
        self.plans = {j: _ScalePlan(frame, j, self.alpha_pos, self.alphas) for j in range(1, frame.J_max + 1)}
        self.Dw = frame.max_degree

    def _alpha_groups(self, npoints: int, batch: int) -> list:
        nA = len(self.alphas)
        per = max(1, npoints * batch * 3)
        step = max(1, _BLOCK_BUDGET // per)
        return [np.arange(a, min(a + step, nA)) for a in range(0, nA, step)]

    def monomial_products(self, F: np.ndarray, D: int, L: int) -> np.ndarray:
        """Padded coefficients of ``f x^a`` up to degree L, shape ``pad_L + (nA, B)``."""
        d = self.d
        B = F.shape[1]
        rule = sphere_rule(d - 1, D + L + self.pmax)
        t_in = ProductGridTransform(d, D, rule)
        t_out = ProductGridTransform(d, L, rule)
        vals = t_in.synthesize(to_padded(d, D, F))
        pts = np.asarray(rule.points)
        out = np.zeros(pad_shape(d, L) + (len(self.alphas), B), dtype=complex)
        for grp in self._alpha_groups(len(pts), B):
            mono = _monomials(pts, self.alphas[grp])
            prod = (vals[:, None, :] * mono[:, :, None]).reshape(len(pts), -1)
            out[..., grp, :] = t_out.analyze(prod).reshape(pad_shape(d, L) + (len(grp), B))
        return out

    def monomial_adjoint(self, U: np.ndarray, L: int, D_out: int) -> np.ndarray:
        """``sum_a P_{<= D_out}(x^a u_a)`` as flat coefficients ``(M_out, B)``."""
        d = self.d
        B = U.shape[-1]
        rule = sphere_rule(d - 1, L + self.pmax + D_out)
        t_u = ProductGridTransform(d, L, rule)
        t_out = ProductGridTransform(d, D_out, rule)
        pts = np.asarray(rule.points)
        acc = np.zeros((len(pts), B), dtype=complex)
        for grp in self._alpha_groups(len(pts), B):
            sub = U[..., grp, :].reshape(pad_shape(d, L) + (len(grp) * B,))
            vals = t_u.synthesize(sub).reshape(len(pts), len(grp), B)
            mono = _monomials(pts, self.alphas[grp])
            acc += np.einsum("pg,pgb->pb", mono, vals)
        return from_padded(d, D_out, t_out.analyze(acc))

    def forward(self, F: np.ndarray, D: int, scales: Sequence[int]):
        """Yield ``(j, values (n_atoms_j, B))`` for the requested scales."""
        d = self.d
        B = F.shape[1]
        wave_scales = [j for j in scales if j >= 1]
        if wave_scales:
            L = min(D + self.pmax, self.Dw)
            C = self.monomial_products(F, D, L)
        for j in scales:
            if j == 0:
                yield 0, F[0:1].copy()
                continue
            plan = self.plans[j]
            sc = plan.scale
            out = np.zeros((sc.n_atoms, B), dtype=complex)
            Lj = min(L, plan.Dj)
            if plan.n_cols == 0 or Lj < 0:
                yield j, out
                continue
            H = _truncate_padded(C, d, L, Lj)[..., plan.cols_a, :]
            mult = np.conj(plan.q[plan.cols_t, : Lj + 1]).T
            H = H * mult.reshape((Lj + 1,) + (1,) * (d - 2) + (plan.n_cols, 1))
            H = np.ascontiguousarray(H).reshape(pad_shape(d, Lj) + (plan.n_cols * B,))
            tr = plan.transform(Lj)
            etas_all = np.asarray(sc.sphere.points)

            def work(rows, plan=plan, tr=tr, H=H, etas_all=etas_all):
                es = plan.eta_slice(tr, rows)
                V = tr.synthesize(H, rows).reshape(-1, plan.n_cols, B)
                M = plan.mixing(etas_all[es])
                W = M @ V
                W *= plan.sqrt_eta[es, None, None] * plan.sqrt_dir[None, :, None]
                return es, W.reshape(-1, B)

            for es, W in _map_ordered(work, plan.row_blocks(tr, B)):
                out[es.start * sc.r : es.stop * sc.r] = W
            yield j, out

    def adjoint(self, coeffs: FrameCoefficients, D_out: int, scales: Sequence[int]) -> np.ndarray:
        d = self.d
        B = coeffs.batch
        L = min(D_out + self.pmax, self.Dw)
        out = np.zeros((dim_poly(d, D_out), B), dtype=complex)
        if 0 in scales:
            out[0] += coeffs.scales[0][0]
        wave_scales = [j for j in scales if j >= 1 and np.any(coeffs.scales[j])]
        if not wave_scales or L < 0:
            return out
        U = np.zeros(pad_shape(d, L) + (len(self.alphas), B), dtype=complex)
        for j in wave_scales:
            plan = self.plans[j]
            sc = plan.scale
            Lj = min(L, plan.Dj)
            if plan.n_cols == 0:
                continue
            tr = plan.transform(Lj)
            cj = coeffs.scales[j]
            etas_all = np.asarray(sc.sphere.points)

            def work(rows, plan=plan, tr=tr, cj=cj, etas_all=etas_all, sc=sc):
                es = plan.eta_slice(tr, rows)
                c = cj[es.start * sc.r : es.stop * sc.r].reshape(-1, sc.r, B)
                c = c * (plan.sqrt_eta[es, None, None] * plan.sqrt_dir[None, :, None])
                M = plan.mixing(etas_all[es])
                Vs = np.conj(M).transpose(0, 2, 1) @ c
                return tr.adjoint(Vs.reshape(-1, plan.n_cols * B), rows)

            G = None
            for part in _map_ordered(work, plan.row_blocks(tr, B)):
                if G is None:
                    G = part
                else:
                    G += part
            G = G.reshape(pad_shape(d, Lj) + (plan.n_cols, B))
            mult = plan.q[plan.cols_t, : Lj + 1].T
            G = G * mult.reshape((Lj + 1,) + (1,) * (d - 2) + (plan.n_cols, 1))
            Uj = _truncate_padded(U, d, L, Lj)
            for c in range(plan.n_cols):
                Uj[..., plan.cols_a[c], :] += G[..., c, :]
        return out + self.monomial_adjoint(U, L, D_out)


def _as_batch(frame: Frame, f) -> tuple:
    if isinstance(f, CoefficientVector):
        if f.d != frame.d:
            raise ValueError("signal dimension does not match the frame")
        return f.values[:, None], f.max_degree
    raise TypeError("expected a CoefficientVector")


def _check_bandwidth(frame: Frame, D: int) -> None:
    limit = 2 ** (frame.J_max + 1)
    if D > limit:
        raise ValueError(f"signal degree {D} exceeds the frame bandwidth {limit}")


def analyze_batch(frame: Frame, F: np.ndarray, degree: int, scales: Iterable[int] | None = None) -> FrameCoefficients:
    """Frame coefficients of several signals given as flat columns ``(M, B)``."""
    F = np.asarray(F, dtype=complex)
    if F.ndim != 2 or F.shape[0] != dim_poly(frame.d, degree):
        raise ValueError("coefficient block has the wrong shape")
    _check_bandwidth(frame, degree)
    wanted = range(frame.J_max + 1) if scales is None else sorted(set(scales))
    B = F.shape[1]
    arrs = [np.zeros((sc.n_atoms, B), dtype=complex) for sc in frame.scales]
    for j, vals in frame._engine.forward(F, degree, list(wanted)):
        arrs[j] = vals
    return FrameCoefficients(frame.d, frame.J_max, arrs)


def analyze(frame: Frame, f: CoefficientVector, scales: Iterable[int] | None = None) -> FrameCoefficients:
    """Coefficients ``<f, Psi^{j,l,m}>`` for all atoms (or the given scales).

    Raises
    ------
    ValueError
        If the degree of `f` exceeds ``2^{J_max + 1}``.
    """
    F, D = _as_batch(frame, f)
    return analyze_batch(frame, F, D, scales)


def synthesize_batch(frame: Frame, c: FrameCoefficients, out_degree: int | None = None, tol: float = 1e-12) -> np.ndarray:
    """``sum_i c_i Psi_i`` for each batch column, as flat coefficients ``(M, B)``.

    The sum is formed up to the largest degree carried by a contributing
    atom.  If `out_degree` is smaller and the discarded part exceeds `tol`
    relative to the result, :class:`TruncationError` is raised.
    """
    if c.d != frame.d or len(c.scales) != len(frame.scales):
        raise ValueError("coefficients do not belong to this frame")
    active = [j for j, a in enumerate(c.scales) if np.any(a)]
    needed = max([0] + [frame.scales[j].spec.max_degree for j in active if j >= 1])
    D_out = needed if out_degree is None else out_degree
    if D_out < 0:
        raise ValueError("out_degree must be non-negative")
    full = frame._engine.adjoint(c, max(D_out, needed), active)
    keep = dim_poly(frame.d, D_out)
    if D_out < needed:
        dropped = np.linalg.norm(full[keep:], axis=0)
        total = np.linalg.norm(full, axis=0)
        if np.any(dropped > tol * np.maximum(total, 1e-300)):
            raise TruncationError(
                f"out_degree {D_out} discards relative energy {float(np.max(dropped / np.maximum(total, 1e-300))):.3e}"
            )
    return full[:keep]


def synthesize(frame: Frame, c: FrameCoefficients, out_degree: int | None = None, tol: float = 1e-12):
    """Reconstruct ``sum_i c_i Psi_i``; returns a CoefficientVector (or a list for batches)."""
    vals = synthesize_batch(frame, c, out_degree, tol)
    D = out_degree
    if D is None:
        active = [j for j, a in enumerate(c.scales) if np.any(a)]
        D = max([0] + [frame.scales[j].spec.max_degree for j in active if j >= 1])
    vecs = [CoefficientVector(frame.d, D, vals[:, b]) for b in range(vals.shape[1])]
    return vecs[0] if len(vecs) == 1 else vecs


def parseval_gaps(frame: Frame, signals: Sequence[CoefficientVector], batch: int = 8) -> np.ndarray:
    """Relative gaps ``|sum |c|^2 - ||f||^2| / ||f||^2`` for several signals."""
    if not signals:
        return np.zeros(0)
    D = max(s.max_degree for s in signals)
    F = np.stack([s.resized(D).values for s in signals], axis=1)
    norms = np.sum(np.abs(F) ** 2, axis=0)
    if np.any(norms == 0):
        raise ValueError("Parseval gap is undefined for the zero signal")
    _check_bandwidth(frame, D)
    energy = np.zeros(F.shape[1])
    for s in range(0, F.shape[1], batch):
        blk = F[:, s : s + batch]
        for _, vals in frame._engine.forward(blk, D, list(range(frame.J_max + 1))):
            energy[s : s + batch] += np.sum(np.abs(vals) ** 2, axis=0)
    return np.abs(energy - norms) / norms


def parseval_gap(frame: Frame, f: CoefficientVector) -> float:
    return float(parseval_gaps(frame, [f])[0])


def _omega_indices(frame: Frame, j: int, omega) -> np.ndarray:
    sc = frame.scales[j]
    idx = []
    for item in omega:
        if isinstance(item, tuple):
            l, m = item
            if not (0 <= l < sc.s and 0 <= m < sc.r):
                raise IndexError(f"atom {item} out of range at scale {j}")
            idx.append(l * sc.r + m)
        else:
            i = int(item)
            if not 0 <= i < sc.n_atoms:
                raise IndexError(f"atom {i} out of range at scale {j}")
            idx.append(i)
    return np.array(sorted(set(idx)), dtype=int)


def lambda_operator_batch(frame: Frame, f: CoefficientVector, J: int, omegas: Sequence) -> list:
    """``f * Phi^J`` plus the partial scale-(J+1) sums over each index set."""
    if J < 0 or J + 1 > frame.J_max:
        raise ValueError(f"need 0 <= J and J + 1 <= J_max={frame.J_max}")
    masks = [_omega_indices(frame, J + 1, om) for om in omegas]
    out_degree = 2 ** (J + 1) - 1
    base = _filter_by_degree(f, out_degree, frame.filter, J)
    coef = analyze(frame, f, scales=[J + 1])
    sc = frame.scales[J + 1]
    cols = np.zeros((sc.n_atoms, len(masks)), dtype=complex)
    for b, m in enumerate(masks):
        cols[m, b] = coef.scales[J + 1][m, 0]
    arrs = [np.zeros((s.n_atoms, len(masks)), dtype=complex) for s in frame.scales]
    arrs[J + 1] = cols
    part = synthesize_batch(frame, FrameCoefficients(frame.d, frame.J_max, arrs), out_degree)
    return [base + CoefficientVector(frame.d, out_degree, part[:, b]) for b in range(len(masks))]


def _filter_by_degree(f: CoefficientVector, out_degree: int, filt: FilterProfile, J: int) -> CoefficientVector:
    # f * Phi^J multiplies degree n by phi(n / 2^J)^2
    g = f.resized(out_degree)
    n = index_table(f.d, out_degree)[:, 0]
    g.values *= np.asarray(filt.phi(n / 2.0**J)) ** 2
    return g


def lambda_operator(frame: Frame, f: CoefficientVector, J: int, omega) -> CoefficientVector:
    return lambda_operator_batch(frame, f, J, [omega])[0]


def atom_coefficients_direct(spec: WaveletSpec, f: CoefficientVector, rotations: np.ndarray, weights=None) -> np.ndarray:
    """``sqrt(w_i) <f, T(g_i) Psi>`` by spatial quadrature with pulled-back points."""
    d = spec.d
    rotations = np.asarray(rotations, dtype=float).reshape(-1, d, d)
    rule = sphere_rule(d - 1, f.max_degree + spec.max_degree)
    pts = np.asarray(rule.points)
    fw = f.evaluate(pts) * rule.weights
    psi = wavelet_coeffs(spec)
    out = np.empty(len(rotations), dtype=complex)
    step = max(1, 400000 // max(1, len(pts) * psi.values.size))
    for s in range(0, len(rotations), step):
        g = rotations[s : s + step]
        pulled = np.einsum("pa,gab->gpb", pts, g).reshape(-1, d)
        vals = psi.evaluate(pulled).reshape(len(g), len(pts))
        out[s : s + step] = np.conj(vals) @ fw
    if weights is not None:
        out *= np.sqrt(np.asarray(weights, dtype=float))
    return out


def analyze_direct(frame: Frame, f: CoefficientVector, scales: Iterable[int] | None = None) -> FrameCoefficients:
    """Reference analysis by per-atom quadrature (cost grows with atoms x nodes)."""
    wanted = range(frame.J_max + 1) if scales is None else scales
    arrs = [np.zeros((sc.n_atoms, 1), dtype=complex) for sc in frame.scales]
    for j in wanted:
        if j == 0:
            arrs[0][0, 0] = f.values[0]
            continue
        sc = frame.scales[j]
        arrs[j][:, 0] = atom_coefficients_direct(sc.spec, f, sc.rotations(), sc.atom_weights())
    return FrameCoefficients(frame.d, frame.J_max, arrs)
