"""Exact Stanley depth, Koszul depth, and numeric depth bounds for squarefree I/J."""

__version__ = "0.1.0"

from .lab import (
    BoundCheck,
    CheckResult,
    EmptyFamily,
    HMap,
    HypothesisMismatch,
    InstanceFamily,
    LcmConfiguration,
    NotApplicable,
    NotNormalized,
    PathReport,
    canonical_key,
    check_depth_floor,
    check_depth_step,
    check_depth_step_open,
    classify_lcm_configuration,
    configuration_instances,
    enumerate_all_pairs,
    enumerate_instances,
    extract_h_map,
    find_maximal_bad_paths,
    h_map_via_solver,
    hunt_counterexamples,
    is_canonical,
    permute_mask,
    removal_pair,
    sample_instances,
    split_modules,
    truncation_pair,
)
from .criteria import (
    CriterionVerdict,
    OutOfRange,
    all_verdicts,
    alternating_criterion,
    alternating_layer_sum,
    best_upper_bound,
    binomial_criterion,
)
from .ideal_io import (
    ParseError,
    load_ideal,
    pair_to_dict,
    pair_to_text,
    parse_ideal,
    parse_ideal_json,
    parse_ideal_text,
    partition_to_dict,
    partition_to_text,
)
from .koszul import DepthResult, FieldSpec, KoszulStrand, build_strand, depth, depth_profile
from .monomial import (
    IdealPair,
    LcmClass,
    Monomial,
    PosetEmpty,
    PosetLayers,
    ValidationError,
    build_poset,
    lcm_pairs,
    subquotient_pair,
)
from .partition import (
    BudgetExhausted,
    Interval,
    IntervalPartition,
    InvalidTarget,
    NotNormalizable,
    SdepthResult,
    hall_necessary_check,
    matching_upper_bound,
    normalize_partition,
    partition_violations,
    sdepth_decision,
    sdepth_exact,
    verify_partition,
)
