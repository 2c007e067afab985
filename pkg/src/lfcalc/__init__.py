"""Local fractional calculus: Mittag-Leffler functions, order-alpha quadrature,
a formal differential algebra and sampled fractal Fourier transforms."""

from .formal import (
    FormalExpr,
    RationalSpectrum,
    Support,
    add,
    convolve_formal,
    definite_integral,
    lf_antiderivative,
    lf_derivative,
    mul_exponential,
    random_expression,
    transform_closed_form,
    verify_formal_identity,
)
from .numeric import (
    Grid,
    SampledSignal,
    estimate_holder_exponent,
    exponential_law_gap,
    lf_derivative_numeric,
    lf_integral_line,
    lf_integral_matched,
    lf_integral_riemann,
    reconciliation_report,
    riemann_integral,
)
from .report import IdentityTag, VerificationReport
from .rules import QuadratureRule, build_measure_matched_rule, build_riemann_rule, moment_closed_form
from .special import AlphaContext, KernelConvention, gamma, kernel, ml_eval, mittag_leffler, pow_alpha
from .transform import (
    SeriesCoefficients,
    Spectrum,
    convolve_numeric,
    forward,
    inverse,
    series_coefficients,
    series_partial_sum,
    verify_numeric,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaContext",
    "FormalExpr",
    "Grid",
    "IdentityTag",
    "KernelConvention",
    "QuadratureRule",
    "RationalSpectrum",
    "SampledSignal",
    "SeriesCoefficients",
    "Spectrum",
    "Support",
    "VerificationReport",
    "add",
    "build_measure_matched_rule",
    "build_riemann_rule",
    "convolve_formal",
    "convolve_numeric",
    "definite_integral",
    "estimate_holder_exponent",
    "exponential_law_gap",
    "forward",
    "gamma",
    "inverse",
    "kernel",
    "lf_antiderivative",
    "lf_derivative",
    "lf_derivative_numeric",
    "lf_integral_line",
    "lf_integral_matched",
    "lf_integral_riemann",
    "mittag_leffler",
    "ml_eval",
    "moment_closed_form",
    "mul_exponential",
    "pow_alpha",
    "random_expression",
    "reconciliation_report",
    "riemann_integral",
    "series_coefficients",
    "series_partial_sum",
    "transform_closed_form",
    "verify_formal_identity",
    "verify_numeric",
]
