"""Exact combinatorics and random generation for trace monoids.

Traces are words up to swapping adjacent independent letters, stored as
stacked layers of commuting letters (heaps of pieces).  The package counts
them exactly through the clique polynomial, realizes the uniform and
length-biased laws as a Markov chain over cliques, samples fixed-length
traces exactly uniformly by rejection, and estimates uniform average costs
by boundary sampling.
"""

from .bundle import MonoidBundle
from .chain import (
    CliqueChain,
    ParryPair,
    clique_chain,
    cylinder_probability,
    g_vector,
    h_vector,
    iter_admissible_chains,
    parry_matrices,
    path_probability,
    power_iteration,
    transition_matrix,
)
from .counting import (
    GrowthTable,
    MobiusPolynomial,
    expected_size,
    growth_coefficients,
    mobius_polynomial,
    optimal_boltzmann_parameter,
    principal_root,
)
from .estimate import (
    CostFunction,
    EstimateReport,
    builtin_cost,
    enumerate_length_k_divisors,
    estimate_expectation,
    phibar,
    theta_k,
)
from .monoid import (
    CliqueFamily,
    ComponentDecomposition,
    IndependencePair,
    cf_admissible,
    decompose_components,
    enumerate_cliques,
    load_monoid,
    parse_monoid,
    validate_independence,
)
from .oracle import (
    ChiSquareResult,
    TraceSet,
    chi_square_uniformity,
    congruence_closure,
    enumerate_Mk,
    enumerate_Mk_by_words,
    exact_uniform_expectation,
    regularized_gamma_q,
)
from .sampling import (
    RandomSource,
    SampleOutcome,
    boundary_prefix_batch,
    merge_product_prefix,
    merge_product_trace,
    sample_boundary_prefix,
    sample_finite_trace,
    sample_product,
    sample_subuniform_trace,
    sample_uniform_Mk,
    sample_uniform_traces,
    topped_prefix_batch,
)
from .traces import (
    Trace,
    divides,
    normalize_word,
    parse_trace,
    project,
    serialize_trace,
    topping,
    trace_concat,
    trace_from_layers,
    trace_line,
)
from .verify import verification_report

__version__ = "0.1.0"
