"""Empirical statistics of short quadratic-character window sums.

The package measures how sums of consecutive quadratic-residue symbols
behave: their moments and CDF against the Gaussian, the combinatorics of
fully-paired index tuples that drive those moments, a signed random
multiplicative model for comparison, averages over primes in short
intervals with their exceptional sets, and the exact sieve weights used
to dominate prime indicators.  Everything is deterministic under a seed
and exact wherever integers or rationals suffice.
"""

from .arith import (
    ExperimentWarning,
    FactorTable,
    PrimeModulus,
    euler_criterion,
    is_perfect_square,
    is_prime,
    jacobi,
    omega,
    prime_density_check,
    primes_in_interval,
    squarefree_part,
    tau,
)
from .prime_avg import (
    DeviationRecord,
    ExceptionalReport,
    GrowthSchedule,
    IntervalSpec,
    avg_character_variance,
    derivative_check,
    exceptional_sets,
    growth_schedule,
    interval_primes,
    moment_deviation,
    random_sparse_vectors,
    variance_ratio,
    variance_ratio_battery,
)
from .rmf import (
    CoefficientVector,
    RmfEnsemble,
    enumerate_second_moment,
    exact_second_moment,
    mc_second_moment,
    rmf_sample,
    rmf_variance_rhs,
)
from .selberg import (
    SieveSystem,
    SieveVerificationError,
    abs_weight_sum,
    build_selberg,
    indicator_value,
    interval_weight_sum,
    verify_indicator,
)
from .squares import (
    PairedCount,
    SquareCountBound,
    TupleReduction,
    count_square_values,
    double_factorial_odd,
    evertse_bound,
    paired_count_bruteforce,
    paired_count_exact,
    paired_count_theta,
    product_is_square,
    reduce_tuple,
    square_iff_reduced,
    square_pair_solutions,
)
from .windows import (
    EmpiricalSummary,
    WindowConfig,
    WindowSeries,
    cdf_vs_gaussian,
    chi_table,
    empirical_summary,
    gaussian_moment,
    incomplete_poly_sum,
    normal_cdf,
    polya_vinogradov_check,
    random_weil_instances,
    value_histogram,
    weil_bound_check,
    window_series,
    window_sum,
)

__version__ = "0.1.0"

__all__ = [
    "ExperimentWarning",
    "FactorTable",
    "PrimeModulus",
    "euler_criterion",
    "is_perfect_square",
    "is_prime",
    "jacobi",
    "omega",
    "prime_density_check",
    "primes_in_interval",
    "squarefree_part",
    "tau",
    "DeviationRecord",
    "ExceptionalReport",
    "GrowthSchedule",
    "IntervalSpec",
    "avg_character_variance",
    "derivative_check",
    "exceptional_sets",
    "growth_schedule",
    "interval_primes",
    "moment_deviation",
    "random_sparse_vectors",
    "variance_ratio",
    "variance_ratio_battery",
    "CoefficientVector",
    "RmfEnsemble",
    "enumerate_second_moment",
    "exact_second_moment",
    "mc_second_moment",
    "rmf_sample",
    "rmf_variance_rhs",
    "SieveSystem",
    "SieveVerificationError",
    "abs_weight_sum",
    "build_selberg",
    "indicator_value",
    "interval_weight_sum",
    "verify_indicator",
    "PairedCount",
    "SquareCountBound",
    "TupleReduction",
    "count_square_values",
    "double_factorial_odd",
    "evertse_bound",
    "paired_count_bruteforce",
    "paired_count_exact",
    "paired_count_theta",
    "product_is_square",
    "reduce_tuple",
    "square_iff_reduced",
    "square_pair_solutions",
    "EmpiricalSummary",
    "WindowConfig",
    "WindowSeries",
    "cdf_vs_gaussian",
    "chi_table",
    "empirical_summary",
    "gaussian_moment",
    "incomplete_poly_sum",
    "normal_cdf",
    "polya_vinogradov_check",
    "random_weil_instances",
    "value_histogram",
    "weil_bound_check",
    "window_series",
    "window_sum",
    "__version__",
]
