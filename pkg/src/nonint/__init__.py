"""Nonintegrability analysis of fold-Hopf and double-Hopf equilibria.

The pipeline: polynomial vector field -> Jacobian spectrum -> normal-form
coefficients -> criteria verdict, with planar reductions, resonance data and
brute-force polynomial searches as cross-checks.
"""

__version__ = "0.1.0"

from .criteria import CriteriaConfig, Verdict, evaluate_double_hopf, evaluate_fold_hopf, rationality_check
from .normalform import DoubleHopfCoeffs, FoldHopfCoeffs, double_hopf_coeffs, fold_hopf_coeffs
from .vectorfield import PolyVectorField

__all__ = [
    "__version__", "CriteriaConfig", "Verdict", "evaluate_double_hopf", "evaluate_fold_hopf",
    "rationality_check", "DoubleHopfCoeffs", "FoldHopfCoeffs", "double_hopf_coeffs",
    "fold_hopf_coeffs", "PolyVectorField",
]
