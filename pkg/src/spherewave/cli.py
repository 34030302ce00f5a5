"""Command line front end: ``spherewave <command> [options]``.

Exit status is 0 on success, 1 when a checked quantity exceeds its
tolerance and 2 for usage, configuration or input errors.  Output depends
only on the arguments (and ``--seed``), never on time or machine.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as swio
from .coeffs import CoefficientVector
from .diagnostics import (
    autocorrelation,
    fig1_grid,
    localization_profile,
    main_lobe_halfwidth,
    stabilizer_rotation,
    steer_check,
    write_grid_csv,
    write_grid_pgm,
)
from .errors import ConfigurationError, ParseError, TruncationError
from .filters import FilterProfile
from .frame import analyze, parseval_gaps, synthesize
from .quadrature import sphere_rule
from .sphere import addition_kernel, embed_rotation, random_points, random_rotation
from .specfun import dim_poly
from .transform import harmonic_matrix
from .wavelet import WaveletSpec, d3_profile, optimal_profile, zonal_profile

__all__ = ["main", "build_parser", "dispatch", "random_signal"]

EXIT_OK, EXIT_TOL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def random_signal(d: int, degree: int, seed: int) -> CoefficientVector:
    """Uniform random complex coefficients on all degrees <= `degree`, unit norm."""
    rng = np.random.default_rng(seed)
    size = dim_poly(d, degree)
    vals = rng.uniform(-1.0, 1.0, size) + 1j * rng.uniform(-1.0, 1.0, size)
    return CoefficientVector(d, degree, vals / np.linalg.norm(vals))


def _frame_args(p: argparse.ArgumentParser, jmax=True, d_default=3) -> None:
    p.add_argument("--d", type=int, default=d_default, help="ambient dimension (sphere S^{d-1})")
    p.add_argument("--K", type=int, default=0, help="directionality order")
    if jmax:
        p.add_argument("--Jmax", type=int, default=3, help="finest scale")
    p.add_argument("--filter", choices=["bump", "spline"], default="bump")
    p.add_argument("--q", type=int, default=0, help="smoothness order of the spline filter")
    p.add_argument("--profile", default="optimal", help="zonal | optimal | custom:PATH")


def _config(args) -> swio.FrameConfig:
    prof = args.profile
    if not (prof in ("zonal", "optimal") or prof.startswith("custom:")):
        raise _UsageError(f"--profile must be zonal, optimal or custom:PATH, got {prof!r}")
    return swio.FrameConfig(args.d, args.K, args.Jmax, args.filter, args.q, prof)


def _spec(args, N=None) -> WaveletSpec:
    filt = FilterProfile(args.filter, args.q)
    if args.profile == "zonal" or args.K == 0:
        if args.profile == "zonal" and args.K != 0:
            raise ConfigurationError("the zonal profile requires K = 0")
        prof = zonal_profile(args.d)
    elif args.profile == "optimal":
        prof = d3_profile(args.K) if args.d == 3 else optimal_profile(args.d, args.K)
    elif args.profile.startswith("custom:"):
        prof = swio.read_profile_table(args.profile[len("custom:"):], args.d, args.K)
    else:
        raise _UsageError(f"unknown profile {args.profile!r}")
    return WaveletSpec(args.d, prof, filt, float(args.N if N is None else N))


class _Out:
    """Writes to --out when given, else to stdout."""

    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        self.fh = open(self.path, "w", encoding="ascii", newline="\n") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()
        return False


def _e(x: float) -> str:
    return f"{x:.3e}"


def cmd_build_frame(args) -> int:
    cfg = _config(args)
    frame = cfg.build()
    with _Out(args.out) as fh:
        swio.write_frame_description(cfg, frame, fh)
    return EXIT_OK


def cmd_random_signal(args) -> int:
    degree = args.degree if args.degree is not None else 2 ** max(args.Jmax - 1, 0)
    v = random_signal(args.d, degree, args.seed)
    with _Out(args.out) as fh:
        fh.write(swio.coeffs_to_text(v))
    return EXIT_OK


def cmd_analyze(args) -> int:
    f = swio.read_coeffs(args.input)
    if args.d is None:
        args.d = f.d
    cfg = swio.read_frame_description(args.frame) if args.frame else _config(args)
    if cfg.d != f.d:
        raise ConfigurationError(f"signal has d={f.d}, frame has d={cfg.d}")
    frame = cfg.build()
    c = analyze(frame, f)
    if not args.out:
        raise _UsageError("analyze needs --out")
    swio.write_frame_coeffs(cfg, c, f.max_degree, args.out)
    energy = float(c.energy()[0])
    norm2 = f.norm() ** 2
    print(f"atoms {frame.n_atoms}")
    print(f"energy {energy:.17g}")
    print(f"signal_norm_sq {norm2:.17g}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    _, frame, c, D = swio.read_frame_coeffs(args.input)
    degree = D if args.degree is None else args.degree
    v = synthesize(frame, c, out_degree=degree, tol=args.tol)
    with _Out(args.out) as fh:
        fh.write(swio.coeffs_to_text(v))
    return EXIT_OK


def _verify_parseval(args) -> int:
    cfg = _config(args)
    frame = cfg.build()
    degree = frame.exact_degree if args.degree is None else args.degree
    sigs = [random_signal(args.d, degree, args.seed + i) for i in range(args.signals)]
    gaps = parseval_gaps(frame, sigs)
    print(f"# parseval d={args.d} K={args.K} Jmax={args.Jmax} degree={degree} atoms={frame.n_atoms}")
    print("signal seed gap")
    for i, g in enumerate(gaps):
        print(f"{i} {args.seed + i} {_e(g)}")
    worst = float(np.max(gaps))
    print(f"max_gap {_e(worst)} tol {_e(args.tol)}")
    return EXIT_OK if worst < args.tol else EXIT_TOL


def _verify_quad(args) -> int:
    """Degree-N rules against orthonormality, plus the per-scale product identity."""
    worst = 0.0
    print("d N nodes max_error")
    for d in args.dims:
        rule = sphere_rule(d - 1, args.N)
        half = args.N // 2
        H = harmonic_matrix(d, half, rule.points)
        G = (H.conj().T * rule.weights) @ H
        err = float(np.max(np.abs(G - np.eye(G.shape[0]))))
        # odd total degree: also pair degree half with degree N - half
        if args.N - half > half:
            H2 = harmonic_matrix(d, args.N - half, rule.points)
            G2 = (H2.conj().T * rule.weights) @ H
            ref = np.eye(G2.shape[0], G2.shape[1])
            err = max(err, float(np.max(np.abs(G2 - ref))))
        worst = max(worst, err)
        print(f"{d} {args.N} {len(rule)} {_e(err)}")
    if args.Jmax >= 1 and args.d in args.dims:
        cfg = _config(args)
        frame = cfg.build()
        f = random_signal(args.d, frame.max_degree, args.seed)
        c = analyze(frame, f)
        n = f.degree_norms() ** 2
        print("# scale identity: sum |c_j|^2 vs sum_n kappa_j(n)^2 ||f_n||^2")
        print("j lhs rhs rel_error")
        for j in range(1, frame.J_max + 1):
            spec = frame.scales[j].spec
            ns = np.arange(n.size)
            rhs = float(np.sum(np.asarray(spec.kappa(ns)) ** 2 * n))
            lhs = float(np.sum(np.abs(c.scales[j]) ** 2))
            rel = abs(lhs - rhs) / max(rhs, 1e-300)
            worst = max(worst, rel)
            print(f"{j} {lhs:.17g} {rhs:.17g} {_e(rel)}")
    print(f"max_error {_e(worst)} tol {_e(args.tol)}")
    return EXIT_OK if worst < args.tol else EXIT_TOL


def _verify_addition(args) -> int:
    rng = np.random.default_rng(args.seed)
    top = 8 if args.degree is None else args.degree
    worst = 0.0
    print("d n max_error")
    for d in args.dims:
        x = random_points(rng, args.pairs, d)
        y = random_points(rng, args.pairs, d)
        Hx = harmonic_matrix(d, top, x)
        Hy = harmonic_matrix(d, top, y)
        deg = np.repeat(np.arange(top + 1), [dim_poly(d, n) - dim_poly(d, n - 1) if n else 1 for n in range(top + 1)])
        prod = Hx * Hy.conj()
        c = np.sum(x * y, axis=1)
        for n in range(top + 1):
            lhs = prod[:, deg == n].sum(axis=1)
            err = float(np.max(np.abs(lhs - addition_kernel(d, n, c))))
            worst = max(worst, err)
            print(f"{d} {n} {_e(err)}")
    print(f"max_error {_e(worst)} tol {_e(args.tol)}")
    return EXIT_OK if worst < args.tol else EXIT_TOL


def _verify_telescope(args) -> int:
    """``phi^2(t) + kappa^2(t) = phi^2(t/2)`` and the partition of unity."""
    filt = FilterProfile(args.filter, args.q)
    t = np.linspace(0.0, 4.0, 4001)
    e1 = float(np.max(np.abs(filt.phi(t) ** 2 + filt.kappa(t) ** 2 - filt.phi(t / 2) ** 2)))
    J = args.Jmax
    n = np.arange(0, 2 ** (J - 1) + 1) if J >= 1 else np.arange(1)
    total = filt.phi(n.astype(float)) ** 2
    for j in range(1, J + 1):
        total = total + filt.kappa(n / 2.0 ** (j - 1)) ** 2
    e2 = float(np.max(np.abs(total - 1.0)))
    print("check max_error")
    print(f"two_scale {_e(e1)}")
    print(f"partition_Jmax{J} {_e(e2)}")
    worst = max(e1, e2)
    print(f"max_error {_e(worst)} tol {_e(args.tol)}")
    return EXIT_OK if worst < args.tol else EXIT_TOL


def cmd_verify(args) -> int:
    if args.dims is None:
        args.dims = [3, 4] if args.check == "quad-exactness" else [3, 4, 5]
    return {
        "parseval": _verify_parseval,
        "quad-exactness": _verify_quad,
        "addition": _verify_addition,
        "telescope": _verify_telescope,
    }[args.check](args)


def cmd_localize(args) -> int:
    print("N a b sup ratio")
    ratios, peaks = [], []
    for N in args.N:
        rep = localization_profile(_spec(args, N), q_eff=args.q_eff)
        for a, b, s, r in rep.annuli:
            print(f"{format(N, 'g')} {a:.6g} {b:.6g} {_e(s)} {_e(r)}")
        ratios.append(rep.max_ratio)
        peaks.append(rep.peak)
    print("N peak max_ratio")
    for N, p, r in zip(args.N, peaks, ratios):
        print(f"{format(N, 'g')} {_e(p)} {_e(r)}")
    return EXIT_OK


def cmd_autocorr(args) -> int:
    spec = _spec(args)
    worst = 0.0
    print("angle quadrature_re quadrature_im closed_re closed_im abs_diff")
    for a in np.linspace(0.0, np.pi, args.angles):
        qv = autocorrelation(spec, a)
        cv = autocorrelation(spec, a, method="closed")
        diff = abs(qv - cv)
        worst = max(worst, diff)
        print(f"{a:.6f} {qv.real:.12e} {qv.imag:.12e} {cv.real:.12e} {cv.imag:.12e} {_e(diff)}")
    print(f"max_diff {_e(worst)} tol {_e(args.tol)}")
    return EXIT_OK if worst < args.tol else EXIT_TOL


def cmd_steer(args) -> int:
    spec = _spec(args)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    print("trial error")
    for i in range(args.trials):
        if spec.d == 3:
            h = stabilizer_rotation(3, float(rng.uniform(0, 2 * np.pi)))
        else:
            h = embed_rotation(random_rotation(rng, spec.d - 1), spec.d)
        err = steer_check(spec, h, n_nodes=args.nodes, degree=args.rule_degree, seed=args.seed + i)
        worst = max(worst, err)
        print(f"{i} {_e(err)}")
    print(f"max_error {_e(worst)} tol {_e(args.tol)}")
    return EXIT_OK if worst < args.tol else EXIT_TOL


def cmd_psi_grid(args) -> int:
    g = fig1_grid(args.K, args.N, nt=args.nt, nphi=args.nphi, d=args.d, filt=FilterProfile(args.filter, args.q))
    if args.out:
        write_grid_csv(g, args.out)
    if args.pgm:
        write_grid_pgm(g, args.pgm)
    sym = g.symmetry_error()
    hw = main_lobe_halfwidth(g)
    print(f"d {g.d} K {g.K} N {format(g.N, 'g')} nt {g.t.size} nphi {g.phi.size}")
    print(f"scale {g.scale:.12e}")
    print(f"symmetry_error {_e(sym)} tol {_e(args.tol)}")
    print(f"half_width {hw:.6e}")
    return EXIT_OK if sym < args.tol else EXIT_TOL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spherewave", description="Directional wavelet frames on spheres.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-frame", help="write a frame description")
    _frame_args(b)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build_frame)

    r = sub.add_parser("random-signal", help="seeded band-limited test signal")
    r.add_argument("--d", type=int, default=3)
    r.add_argument("--degree", type=int)
    r.add_argument("--Jmax", type=int, default=3, help="default degree is 2^(Jmax-1)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_random_signal)

    a = sub.add_parser("analyze", help="coefficient file -> frame coefficient file")
    a.add_argument("input")
    _frame_args(a, d_default=None)
    a.add_argument("--frame", help="frame description file (overrides frame flags)")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synthesize", help="frame coefficient file -> coefficient file")
    s.add_argument("input")
    s.add_argument("--degree", type=int, help="output degree (default: the analyzed signal's)")
    s.add_argument("--tol", type=float, default=1e-12, help="relative energy allowed outside --degree")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synthesize)

    v = sub.add_parser("verify", help="numerical identities with tolerance")
    v.add_argument("check", choices=["parseval", "quad-exactness", "addition", "telescope"])
    _frame_args(v)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-10)
    v.add_argument("--degree", type=int)
    v.add_argument("--N", type=int, default=16, help="rule degree for quad-exactness")
    v.add_argument("--dims", type=int, nargs="+", help="dimensions (default 3 4 5; 3 4 for quad-exactness)")
    v.add_argument("--signals", type=int, default=20)
    v.add_argument("--pairs", type=int, default=100)
    v.set_defaults(func=cmd_verify)

    lo = sub.add_parser("localize", help="decay table around the pole")
    _frame_args(lo, jmax=False)
    lo.add_argument("--N", type=float, nargs="+", default=[16.0, 32.0, 64.0])
    lo.add_argument("--q-eff", dest="q_eff", type=int)
    lo.set_defaults(func=cmd_localize)

    ac = sub.add_parser("autocorr", help="auto-correlation: quadrature vs closed form")
    _frame_args(ac, jmax=False)
    ac.add_argument("--N", type=float, default=8.0)
    ac.add_argument("--angles", type=int, default=20)
    ac.add_argument("--tol", type=float, default=1e-9)
    ac.set_defaults(func=cmd_autocorr)

    st = sub.add_parser("steer", help="steering error from fixed orientations")
    _frame_args(st, jmax=False)
    st.add_argument("--N", type=float, default=8.0)
    st.add_argument("--nodes", type=int, help="plane rotations for d = 3 (default 2K+1)")
    st.add_argument("--rule-degree", dest="rule_degree", type=int, help="direction rule degree for d >= 4 (default 2K)")
    st.add_argument("--trials", type=int, default=5)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--tol", type=float, default=1e-9)
    st.set_defaults(func=cmd_steer)

    pg = sub.add_parser("psi-grid", help="(t, phi) slice of an optimal directional wavelet")
    pg.add_argument("--d", type=int, default=4)
    pg.add_argument("--K", type=int, default=4)
    pg.add_argument("--N", type=float, default=32.0)
    pg.add_argument("--nt", type=int, default=513)
    pg.add_argument("--nphi", type=int, default=256)
    pg.add_argument("--filter", choices=["bump", "spline"], default="bump")
    pg.add_argument("--q", type=int, default=0)
    pg.add_argument("--tol", type=float, default=1e-9)
    pg.add_argument("--out", help="CSV output path")
    pg.add_argument("--pgm", help="optional P5 image path")
    pg.set_defaults(func=cmd_psi_grid)
    return p


def dispatch(config: argparse.Namespace) -> int:
    """Run one parsed command and return its exit status.

    `config` is the namespace produced by ``build_parser().parse_args``.
    Configuration, parse and truncation errors are reported on stderr and
    give exit status 2.
    """
    try:
        return config.func(config)
    except (ConfigurationError, ParseError, TruncationError, ValueError, IndexError, OSError) as exc:
        print(f"spherewave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except _UsageError as exc:
        parser.error(str(exc))
    return EXIT_USAGE

if __name__ == "__main__":
    sys.exit(main())
