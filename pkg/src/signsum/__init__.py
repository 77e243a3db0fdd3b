"""Certified computations for Rademacher sums and the Gaussian-tail lower
bound on P[|S| <= 1] for sum(v_i^2) <= 1."""
from .distribution import (
    MassCheck,
    ProbabilityResult,
    SignedSumDistribution,
    WeightVector,
    enumerate_distribution,
    load_weights,
    normalize_for_bd,
    parse_weights,
    prob_abs_shifted_le,
    prob_between,
    prob_tail_ge,
    quantile_mass_check,
)
from .errors import (
    CapacityError,
    ContractError,
    DomainError,
    PrecisionExhausted,
    SignsumError,
    UsageError,
    WeightFileError,
)
from .gaussian import bd_bound, f_of_c, q_prime, q_second, q_second_derivative_identity_check, q_tail
from .numerics import Interval, interval_arith, interval_from_rational, interval_sqrt, working_precision
from .report import Evidence, Verdict, VerificationReport
from .search import SearchConfig, SearchResult, minimize_prob, sweep_family
from .surds import RootSum, parse_real
from .verifier import (
    LemmaTwoInstance,
    verify_bd_on_instance,
    verify_convexity_q_invsqrt,
    verify_f_properties,
    verify_lemma1_on_instance,
    verify_lemma2_all_k,
    verify_lemma2_finite,
    verify_main_conclusion,
    verify_main_constant,
    verify_xi_inequality,
)

__version__ = "0.1.0"
