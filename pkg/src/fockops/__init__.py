"""Operators on Fock spaces: classifiers, norms, finite sections and a reference oracle."""

__version__ = "0.1.0"

from .functions import (AffineSymbol, ExpPolyFunction, TaylorFunction, antiderivative, compose_affine,
                        differentiate, evaluate, kernel, max_modulus, multiply, normalized_kernel,
                        order_of_growth, solve_preimage)
from .norms import FockTypeParams, NormResult, QuadratureConfig, fock_norm, hu_norm, monomial_norm_exact, paley_norm
from .oracle import OracleResult, brute_force_Lq_integral, brute_force_norm
from .sections import FiniteSectionMatrix, build_matrix, ratio_test, sigma_min, spectral_radius_estimate
from .symbols import (ClassificationReport, OperatorSpec, Verdict, classify_D_focktype, classify_WCD,
                      g_region, omega_region, order_bounded, sampling_probe, sup_L, surjectivity)

__all__ = [
    "AffineSymbol", "ExpPolyFunction", "TaylorFunction", "antiderivative", "compose_affine", "differentiate",
    "evaluate", "kernel", "max_modulus", "multiply", "normalized_kernel", "order_of_growth", "solve_preimage",
    "FockTypeParams", "NormResult", "QuadratureConfig", "fock_norm", "hu_norm", "monomial_norm_exact",
    "paley_norm", "OracleResult", "brute_force_Lq_integral", "brute_force_norm", "FiniteSectionMatrix",
    "build_matrix", "ratio_test", "sigma_min", "spectral_radius_estimate", "ClassificationReport",
    "OperatorSpec", "Verdict", "classify_D_focktype", "classify_WCD", "g_region", "omega_region",
    "order_bounded", "sampling_probe", "sup_L", "surjectivity",
]
