"""Cycle statistics of uniform random permutations with bounded cycle length.

Exact counting and joint laws of small-cycle counts, three exact-uniform
samplers, Dickman-function numerics, per-permutation event probabilities
for the restricted transposition walk, and total-variation distances to
the product-Poisson reference together with the two closed-form bounds.
"""

from .counting import (
    CountTable,
    RestrictedCountTable,
    SparsePMF,
    brute_force_count,
    brute_force_pmf,
    count_ratio_check,
    count_table,
    expected_count,
    first_element_cycle_length_pmf,
    joint_pmf,
    restricted_count_table,
    support_size,
)
from .dickman import (
    DickmanEvaluator,
    GammaBoundReport,
    RhoRatioReport,
    XiEvaluator,
    gamma_bound_check,
    log_rho,
    rho,
    rho_ratio_check,
    xi,
)
from .distances import (
    BoundBreakdown,
    PoissonSpec,
    TvEstimate,
    harmonic_number,
    macroscopic_bound,
    refined_bound,
    tv_empirical,
    tv_exact,
)
from .errors import ResourceLimitError
from .permutations import (
    CountsVector,
    CycleStructure,
    Permutation,
    Transposition,
    apply_transposition,
    cycle_counts,
    cycle_structure,
    longest_cycle,
    permutations_with_bounded_cycles,
)
from .sampling import (
    SamplerConfig,
    TransitionMatrix,
    acceptance_rate,
    draw,
    mcmc_step,
    sample_rejection,
    sample_sequential,
    stage_length_pmf,
    stationarity_matrix,
)
from .stein import (
    ClosedFormMismatch,
    ClosedFormReport,
    EventTally,
    SteinParameters,
    TermEstimates,
    creation_probability,
    destruction_probability,
    destruction_probability_rearranged,
    event_probabilities,
    term_estimates_exact,
    term_estimates_mc,
    verify_closed_forms,
)

__version__ = "0.1.0"
