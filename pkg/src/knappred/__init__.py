"""Prediction-augmented online algorithms for the Unit Profit Knapsack problem.

Items arrive online with sizes in (0, 1] and unit profit; the algorithm
gets a prediction of the average item size in the offline optimum.  This
package implements the adaptive-threshold algorithms built on that
prediction, the adversarial constructions that make their guarantees
tight, advice encodings at bounded bit budgets, and an analysis harness
that checks every stated bound empirically.
"""

from .advice import (
    AdviceError,
    SingleValueAdvice,
    TwoValueAdvice,
    encode_average,
    encode_two_value,
    frame_self_delimiting,
    parse_self_delimiting,
    run_at_with_encoded_advice,
    run_two_value_advice,
    two_value_guaranteed_ratio,
)
from .adversaries import (
    AdversaryConfigError,
    AdversaryOutcome,
    ProtocolError,
    SemiTrustedAdversaryConfig,
    TradeoffAdversaryConfig,
    TrustedAdversaryConfig,
    advice_lb_exhaustive_check,
    advice_lb_family,
    run_semitrusted_adversary,
    run_tradeoff_adversary,
    run_trusted_adversary,
    sigma_harmonic,
)
from .analysis import (
    AT_SLACK,
    ATUP_SLACK,
    GenerationError,
    RatioReport,
    SweepRow,
    SweepSpec,
    c_at_bound,
    c_atup_bound,
    generalized_harmonic,
    harmonic_bounds_check,
    lemma2_check,
    random_sequence,
    run_sweep,
    selfcheck,
)
from .core import (
    PackingResult,
    SequenceError,
    brute_force_opt,
    greedy_accept_all,
    opt_average,
    opt_pack,
    read_sequence_file,
    write_sequence_file,
)
from .engine import (
    AdaptiveThresholdRun,
    ThresholdFunction,
    at_threshold,
    atup_threshold,
    current_index,
    prefix_sums_bounded,
    run_adaptive_threshold,
    run_at,
    run_atup,
)

__version__ = "0.1.0"
