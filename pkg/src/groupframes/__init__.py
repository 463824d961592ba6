"""Unit-norm tight frames from characters of finite groups, with exact
coherence analysis.

Constructions: rows of character tables of the additive group of GF(p^r)
indexed by a multiplicative subgroup (sign matrices when p = 2, Paley
equiangular frames when the subgroup index is 2), seeded random row
selections for baselines, and frames stacked from the induced or cuspidal
representations of SL2(F_q) for q even.  Analysis: worst-case and average
coherence, Welch and structural bounds, tightness, and the census of
distinct Gram values, each computed by at least two independent routes.
"""

from .coherence import (
    CoherenceReport,
    CosetSums,
    analyze,
    average_coherence,
    bound_general_kappa,
    bound_m_odd,
    bound_orbit_min,
    bound_sqrt_kappa,
    coherence_bruteforce,
    coherence_fast,
    coherence_properties,
    coset_sums,
    inner_product_exact,
    multiplier_sums,
    random_fourier_bound,
    random_fourier_window,
    roots_of_unity,
    tightness_residual,
    w_vector_check,
    welch_bound,
)
from .errors import (
    BadShape,
    ContextMismatch,
    DegreeTooLarge,
    DivisionByZero,
    GroupFramesError,
    InvariantViolation,
    KappaOddWithModdP,
    MNotOddDivisor,
    NotADivisor,
    NotEvenPrimePower,
    NotNormalized,
    NotPrime,
    QMinusOneNotPrime,
    QPlusOneNotPrime,
    ResourceCap,
    ResourceError,
    TooManyRows,
    ValidationError,
    ZeroElement,
)
from .frames import (
    ComplexFrame,
    ExponentFrame,
    SignMatrix,
    build_field_frame,
    build_hadamard_frame,
    build_harmonic_frame,
    build_random_exponent_frame,
    build_random_hadamard_frame,
    load_frame,
    materialize,
    save_complex_csv,
    save_exponent_csv,
    save_sign_csv,
)
from .gf import FieldCtx, FieldElem, build_field, is_prime, prime_factors
from .sl2 import (
    Sl2ClassData,
    admissible_q,
    sl2_class_data,
    sl2_cuspidal_coherence,
    sl2_induced_bound,
    sl2_induced_coherence,
    sl2_report,
    sl2_welch,
)
from .subgroups import (
    ZERO,
    SubgroupSpec,
    coset_of,
    is_difference_set,
    parity_of_minus_one,
    subgroup_of_order,
    translation_degree,
)

__version__ = "0.1.0"

__all__ = [
    "BadShape",
    "CoherenceReport",
    "ComplexFrame",
    "ContextMismatch",
    "CosetSums",
    "DegreeTooLarge",
    "DivisionByZero",
    "ExponentFrame",
    "FieldCtx",
    "FieldElem",
    "GroupFramesError",
    "InvariantViolation",
    "KappaOddWithModdP",
    "MNotOddDivisor",
    "NotADivisor",
    "NotEvenPrimePower",
    "NotNormalized",
    "NotPrime",
    "QMinusOneNotPrime",
    "QPlusOneNotPrime",
    "ResourceCap",
    "ResourceError",
    "SignMatrix",
    "Sl2ClassData",
    "SubgroupSpec",
    "TooManyRows",
    "ValidationError",
    "ZERO",
    "ZeroElement",
    "admissible_q",
    "analyze",
    "average_coherence",
    "bound_general_kappa",
    "bound_m_odd",
    "bound_orbit_min",
    "bound_sqrt_kappa",
    "build_field",
    "build_field_frame",
    "build_hadamard_frame",
    "build_harmonic_frame",
    "build_random_exponent_frame",
    "build_random_hadamard_frame",
    "coherence_bruteforce",
    "coherence_fast",
    "coherence_properties",
    "coset_of",
    "coset_sums",
    "inner_product_exact",
    "is_difference_set",
    "is_prime",
    "load_frame",
    "materialize",
    "multiplier_sums",
    "parity_of_minus_one",
    "prime_factors",
    "random_fourier_bound",
    "random_fourier_window",
    "roots_of_unity",
    "save_complex_csv",
    "save_exponent_csv",
    "save_sign_csv",
    "sl2_class_data",
    "sl2_cuspidal_coherence",
    "sl2_induced_bound",
    "sl2_induced_coherence",
    "sl2_report",
    "sl2_welch",
    "subgroup_of_order",
    "tightness_residual",
    "translation_degree",
    "w_vector_check",
    "welch_bound",
]
