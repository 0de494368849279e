"""Capacity lower bounds for binary channels with i.i.d. deletions and insertions.

The package computes analytic lower bounds on the capacity of the deletion
channel, the insertion channel (two bounds), and the combined channel, each
of the form ``h(gamma)`` minus computable limiting conditional-entropy
penalties, maximized over the Markov source parameter gamma.  Everything is
validated three ways: truncated series against literal closed forms, exact
small-instance enumeration, and seeded Monte Carlo simulation.
"""

from .core import (
    ChannelParams,
    MarkovSourceParams,
    RunSequence,
    EntropyTerm,
    binary_entropy,
    generate_markov_sequence,
    to_runs,
    from_runs,
    geometric_run_pmf,
)
from .channel_sim import (
    Action,
    AuxSequences,
    ChannelOutput,
    apply_pattern,
    apply_delins,
    apply_deletion,
    apply_insertion,
    apply_cascade,
    flip_complementary,
    augment_with_deleted_runs,
)
from .analytic_bounds import (
    SeriesConfig,
    AnalyticIntermediates,
    BoundResult,
    markov_q,
    intermediates,
    stationary_iy,
    h_I_limit,
    h_T_limit,
    insertion_penalty_credit,
    cond_entropy_S_given_YY,
    closed_form_HS2,
    run_law_deletion_H,
    run_law_duplication_H,
    run_law_delins_H,
    closed_form_HLXLY,
    delins_S_term,
    closed_form_delins_S,
    lb_deletion,
    lb1_insertion,
    lb2_insertion,
    lb_delins,
)
from .gamma_optimizer import maximize_over_gamma, optimize_bound, sweep

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "MarkovSourceParams", "RunSequence", "EntropyTerm",
    "binary_entropy", "generate_markov_sequence", "to_runs", "from_runs",
    "geometric_run_pmf",
    "Action", "AuxSequences", "ChannelOutput", "apply_pattern", "apply_delins",
    "apply_deletion", "apply_insertion", "apply_cascade", "flip_complementary",
    "augment_with_deleted_runs",
    "SeriesConfig", "AnalyticIntermediates", "BoundResult", "markov_q",
    "intermediates", "stationary_iy", "h_I_limit", "h_T_limit",
    "insertion_penalty_credit", "cond_entropy_S_given_YY", "closed_form_HS2",
    "run_law_deletion_H", "run_law_duplication_H", "run_law_delins_H",
    "closed_form_HLXLY", "delins_S_term", "closed_form_delins_S",
    "lb_deletion", "lb1_insertion", "lb2_insertion", "lb_delins",
    "maximize_over_gamma", "optimize_bound", "sweep",
]
