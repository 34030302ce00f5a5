"""Directional polynomial wavelets and tight frames on the unit sphere S^{d-1}.

Submodules
----------
specfun      Gegenbauer polynomials, dimensions, normalization constants.
sphere       Coordinates, harmonics, rotations.
quadrature   Gauss rules, product rules on spheres, directional rules.
transform    Fast harmonic transforms on product grids.
coeffs       Harmonic coefficient vectors.
filters      Low-pass and band-pass filter profiles.
wavelet      Wavelets, scaling functions and directionality tables.
frame        Frames, analysis, synthesis and the projection operators.
diagnostics  Localization, norms, auto-correlation, steering, slice grids.
io           Text file formats.
cli          Command line interface.
"""

from .coeffs import CoefficientVector, project_function
from .diagnostics import (
    autocorrelation,
    fig1_grid,
    localization_profile,
    lp_norm,
    steer_check,
)
from .errors import ConfigurationError, ConvergenceError, ParseError, TruncationError
from .filters import FilterProfile, bump_filter, spline_filter
from .frame import (
    Frame,
    FrameCoefficients,
    analyze,
    analyze_direct,
    build_frame,
    lambda_operator,
    parseval_gap,
    synthesize,
)
from .quadrature import gauss_gegenbauer, so2_rule, sphere_directional_rule, sphere_rule
from .sphere import HarmonicIndex, eval_harmonic, rotation_to_north
from .wavelet import (
    DirectionalProfile,
    WaveletSpec,
    custom_profile,
    d3_profile,
    optimal_profile,
    scaling_coeffs,
    wavelet_coeffs,
    zonal_profile,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector",
    "project_function",
    "autocorrelation",
    "fig1_grid",
    "localization_profile",
    "lp_norm",
    "steer_check",
    "ConfigurationError",
    "ConvergenceError",
    "ParseError",
    "TruncationError",
    "FilterProfile",
    "bump_filter",
    "spline_filter",
    "Frame",
    "FrameCoefficients",
    "analyze",
    "analyze_direct",
    "build_frame",
    "lambda_operator",
    "parseval_gap",
    "synthesize",
    "gauss_gegenbauer",
    "so2_rule",
    "sphere_directional_rule",
    "sphere_rule",
    "HarmonicIndex",
    "eval_harmonic",
    "rotation_to_north",
    "DirectionalProfile",
    "WaveletSpec",
    "custom_profile",
    "d3_profile",
    "optimal_profile",
    "scaling_coeffs",
    "wavelet_coeffs",
    "zonal_profile",
]
