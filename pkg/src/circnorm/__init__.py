"""Induced p-norms, spectra and certified bounds for circulant matrices."""

from .circulant import (
    Circulant,
    Spectrum,
    TwoParamCirculant,
    UnitaryFactor,
    dense,
    dft_matrix,
    eigenvalues,
    make_two_param,
    matvec,
    shift_matrix,
    two_param_spectrum,
    verify_factorization,
)
from .estimator import (
    EstimateReport,
    EstimatorOptions,
    brute_force_norm_p,
    check_duality,
    check_monotonicity,
    estimate_norm_p,
)
from .norms import (
    Certificate,
    NormResult,
    Regime,
    bounds_p,
    conjugate_exponent,
    exact_norm_2,
    exact_norm_p_nonneg,
    general_nonneg_circulant_norm,
    lambda_max_abs,
    norm_1_inf,
    norm_p,
    vector_norm,
    witness_vector,
)

__version__ = "0.1.0"
