"""Gibbs measures on subshifts of finite type, with quasi-invariance checks."""

__version__ = "0.1.0"

from .errors import (
    BadAlpha,
    BadParameters,
    BadShape,
    BadSupport,
    KTooSmall,
    NoConvergence,
    NotInvolution,
    NotMixing,
    NullCylinder,
    ParseError,
    RangeMismatch,
    SftgibbsError,
    SymbolOutOfRange,
    WindowTooSmall,
    ZeroColumn,
    ZeroRow,
)
from .sft import (
    Cylinder,
    MixingReport,
    SftModel,
    admissible_words,
    allowed_pairs,
    boundary_pair_cylinder,
    check_mixing,
    constrained_word_exists,
    double_pair_cylinder,
    left_right_sets,
    merge_cylinders,
    pair_threshold,
    separation_threshold,
    validate_sft,
    witness_word,
    word_array,
)
from .permutations import (
    FiniteSupportPermutation,
    WindowConfiguration,
    apply_permutation,
    compose,
    in_permutation_domain,
    invert,
    make_swap_involution,
    permutation_from_json,
    permutation_to_json,
    swap_domain_vs_formula,
)
from .potentials import (
    BlockMap,
    DecayEnvelope,
    FiniteRangePotential,
    decay_envelope,
    finite_range_potential,
    is_cohomologous,
    two_block_recode,
    variation,
    zero_potential,
)
from .gibbs import (
    CylinderMeasureResult,
    GibbsBoundsReport,
    GibbsMeasureModel,
    build_gibbs_measure,
    cylinder_measure,
    entropy,
    mean_potential,
    power_iteration,
    recheck_gibbs_bounds,
    sample_trajectory,
    verify_gibbs_bounds,
    word_cylinder_measures,
)
from .quasi_invariance import (
    CocycleEvaluation,
    CocycleIdentityReport,
    QuasiInvarianceReport,
    cocycle_bound,
    cocycle_limit,
    permutation_cocycle,
    pullback_cylinder,
    rn_ratio,
    verify_cocycle_identity,
    verify_quasi_invariance,
)
from .mixing import (
    FactorizationGap,
    birkhoff_average,
    decay_slope,
    factorization_gap,
    max_gap_decay,
    second_eigenvalue_modulus,
)
