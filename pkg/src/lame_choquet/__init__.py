"""Heine-Stieltjes spectral pairs for Lame operators, with weighted-majorization
and Choquet-order certificates for their zeros."""
from .classical import (
    JacobiParams,
    SzNagyConfig,
    arcsine_bound_check,
    derivative_chain_check,
    eq_j_strong_check,
    jacobi_poly,
    jacobi_zeros,
    lemma1_check,
    lemma2_check,
    sz_nagy_zeros,
    theorem_tj_check,
)
from .lame import (
    LameInstance,
    SpectralPair,
    enumerate_solutions,
    recover_van_vleck,
    sigma_count,
    solve_bethe,
    solve_multistart,
    solve_newton_coeffs,
)
from .majorization import (
    HingeGrid,
    TransferCertificate,
    WeightedPointConfig,
    check_eq_strong,
    check_majorization,
    check_res_k,
    hinge_gap,
    weights_k,
    weights_k2,
)
from .measures import (
    AtomicMeasure,
    choquet_compare,
    log_potential,
    moment,
    root_counting_measure,
    semiclassical_run,
    thermodynamic_run,
    tilde_q2_measure,
)
from .policy import DEFAULT_POLICY, LameChoquetError, NumericPolicy
from .poly import ComplexPolynomial, derivative, divide_with_remainder, find_roots, from_roots, multiply

__version__ = "0.1.0"
