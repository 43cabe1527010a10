"""Transfer operators of the Gauss map with a twist, and what they count."""

from .determinant import fredholm_det, zeta_minus, zeta_plus, zeta_product
from .eta import eta_odd_via_census, eta_tilde, eta_via_census, eta_via_determinant
from .lerch import lerch_tail
from .operator import (
    EigenvalueTrackingError,
    NuclearityError,
    OperatorTruncation,
    SpectralResult,
    TailConvergenceError,
    build_operator,
    leading_eigenvalue,
    spectrum,
    twisted_square,
)
from .traces import trace_via_words
from .zeros import (
    Estimate,
    continuity_exponent,
    dominant_eigenvalue,
    eigenvalue_shift,
    find_dominant_zero,
    residue,
)

__all__ = [
    "EigenvalueTrackingError", "Estimate", "NuclearityError", "OperatorTruncation",
    "SpectralResult", "TailConvergenceError", "build_operator", "continuity_exponent",
    "dominant_eigenvalue", "eigenvalue_shift", "eta_odd_via_census", "eta_tilde",
    "eta_via_census", "eta_via_determinant", "find_dominant_zero", "fredholm_det",
    "leading_eigenvalue", "lerch_tail", "residue", "spectrum", "trace_via_words",
    "twisted_square", "zeta_minus", "zeta_plus", "zeta_product",
]
