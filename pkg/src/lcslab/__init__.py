"""LCS microstructure laboratory.

Exact longest-common-subsequence kernels, gap-extremal tie-breaking over
optimal alignments, seeded generators for block-insertion string models, and
Monte Carlo estimators for the mean-LCS curve and block-alignment events.
"""

__version__ = "0.1.0"

from .blocks import (
    MAXIMIZE_GAPS,
    MINIMIZE_GAPS,
    BlockGapStats,
    BlockSpec,
    extremal_block_gaps,
    find_natural_block,
    gaps_of_alignment,
)
from .errors import InputError
from .estimators import (
    Condition3Result,
    ConvergenceReport,
    Estimate,
    GammaCurve,
    check_condition3,
    check_curve_concavity,
    check_curve_symmetry,
    check_superadditivity,
    convergence_rate_check,
    curve_to_csv,
    estimate_curve,
    estimate_gamma,
    estimate_right_derivative,
)
from .experiments import (
    DEFAULT_GAMMA_STAR,
    EVENTS,
    EventRun,
    ExperimentConfig,
    TableRow,
    TrialRecord,
    TrialRun,
    estimate_event_probability,
    heuristic_delta,
    run_delta_trials,
    run_event_trials,
    run_gap_trials,
    run_table_suite,
)
from .generators import (
    ModelInstance,
    RngSeed,
    block_length_for,
    excise_block,
    excise_block_prefix,
    gen_iid,
    make_model_instance,
    round_half_up,
)
from .lcs import (
    AlignmentEnumeration,
    brute_force_lcs,
    enumerate_optimal_alignments,
    lcs_length,
    lcs_length_bitparallel,
    one_optimal_alignment,
)
from .oracles import run_oracle_suites
from .sequences import Alignment, Alphabet, SymbolSequence

__all__ = [
    "Alignment",
    "AlignmentEnumeration",
    "Alphabet",
    "BlockGapStats",
    "BlockSpec",
    "Condition3Result",
    "ConvergenceReport",
    "DEFAULT_GAMMA_STAR",
    "EVENTS",
    "Estimate",
    "EventRun",
    "ExperimentConfig",
    "GammaCurve",
    "InputError",
    "MAXIMIZE_GAPS",
    "MINIMIZE_GAPS",
    "ModelInstance",
    "RngSeed",
    "SymbolSequence",
    "TableRow",
    "TrialRecord",
    "TrialRun",
    "block_length_for",
    "brute_force_lcs",
    "check_condition3",
    "check_curve_concavity",
    "check_curve_symmetry",
    "check_superadditivity",
    "convergence_rate_check",
    "curve_to_csv",
    "enumerate_optimal_alignments",
    "estimate_curve",
    "estimate_event_probability",
    "estimate_gamma",
    "estimate_right_derivative",
    "excise_block",
    "excise_block_prefix",
    "extremal_block_gaps",
    "find_natural_block",
    "gaps_of_alignment",
    "gen_iid",
    "heuristic_delta",
    "lcs_length",
    "lcs_length_bitparallel",
    "make_model_instance",
    "one_optimal_alignment",
    "round_half_up",
    "run_delta_trials",
    "run_event_trials",
    "run_gap_trials",
    "run_oracle_suites",
    "run_table_suite",
]
