"""Asymptotic and exact expansions of the Mathieu-Gaussian series."""

from .algebraic import (
    H1,
    algebraic_expansion_general,
    algebraic_term,
    finite_pole_part,
    finite_pole_terms,
    leading_term,
)
from .appendix_b import double_pole_terms, gamma_minus1_expansion, tau, tau_series
from .coefficients import (
    CoefficientSet,
    coeff_A,
    coeff_A_poly,
    coeff_B,
    coeff_B_row,
    coeff_C,
    coeff_C_poly,
    coeff_C_poly_convolution,
    coeff_C_poly_hypergeometric,
    coeff_c,
    coeff_c_hat,
    e_poly,
    poly_eval,
    poly_str,
    residue_R,
    residue_R_poly,
    sigma_closed,
    sigma_r,
    sigma_sum,
)
from .exponential import (
    exact_parts,
    gaussian_k_sum,
    j1_exact,
    j1_terms,
    j2_asymptotic,
    j2_term,
    j_theorem1,
    j_theorem1_negative_p,
    s_hat,
    theorem2_total,
)
from .result import ExpansionResult, Truncation, truncate

__all__ = [name for name in dir() if not name.startswith("_")]
