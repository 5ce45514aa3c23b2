"""critlab — structure theory of small product sets, computationally.

Exact (rational-arithmetic) tooling for classifying subset pairs by how
their product-set size compares to the sum of their sizes, in finite groups
and in the circle / twisted-circle models: sum-set transforms, reduction
certificates, prime-order classification, bilinear factorization, shifted
interval detection, and relative (subgroup-slice) criticality.
"""

from __future__ import annotations

from .dyson import (
    DysonStep,
    DysonTrace,
    TerminationReason,
    dyson_run,
    dyson_step,
    least_shrinking_pivot,
)
from .errors import (
    BilinearConditionError,
    ChainError,
    ClassificationError,
    CritlabError,
    EmptySubsetError,
    GroupOrderCapError,
    GroupTableError,
    KernelMismatchError,
    NoMatchingAutomorphismError,
    NotAbelianError,
    NotNormalError,
    NotSubgroupError,
    ParentMismatchError,
    PivotError,
    PointCorrectionError,
    PreconditionError,
    RigidityPreconditionError,
    SearchBudgetError,
    SelfInverseCharacterError,
    SoundnessError,
    VosperPreconditionError,
)
from .group_core import (
    FiniteGroup,
    Homomorphism,
    SemidirectSpec,
    Subgroup,
    automorphisms,
    build_alternating4,
    build_cyclic,
    build_dicyclic3,
    build_dihedral,
    build_product,
    build_quaternion8,
    build_semidirect,
    generating_set,
    homomorphisms,
    order_cap,
    quotient,
    small_groups,
    subgroups,
)
from .reduction import (
    BilinearFactorization,
    ReductionCertificate,
    SturmianWitness,
    VosperStructure,
    detect_sturmian_reduction,
    factorize_bilinear,
    image_subset,
    kemperman_reduce,
    kneser_reduce,
    match_pullbacks,
    preimage_subset,
    split_characters,
    validate_certificate,
    vosper_classify,
    witness_checks,
)
from .relative import (
    CriticalityWitness,
    RelativizeOutcome,
    SliceView,
    SupportSet,
    almost_sub_critical_slice,
    check_chain_criticality,
    detect_local_subcritical,
    disintegrate,
    is_balanced,
    is_critical_wrt,
    relativize,
    slice_subset,
    support,
)
from .sturmian_models import (
    SturmianModel,
    discretized_plain_model,
    discretized_twisted_model,
)
from .subset_algebra import (
    GroupSubset,
    PairClass,
    PairTag,
    classify_pair,
    haar,
    invert,
    left_stabilizer,
    product_set,
    right_stabilizer,
    stabilizer,
    translate,
)
from .torus_exact import (
    Arc,
    ArcSet,
    RigidityOutcome,
    SturmianSpec,
    TwistedSet,
    arc,
    arc_sumset,
    arcset_contains,
    arcset_measure,
    format_rational,
    intersect_arcsets,
    is_regular,
    is_stable_pair,
    make_sturmian,
    negate_arcset,
    parse_rational,
    rigidity_force_containment,
    translate_arcset,
    twisted_measure,
    twisted_product,
    union_arcsets,
)
from .acceptance import CriterionResult, run_all, run_criterion
from .sweeps import (
    SweepOutcome,
    survey_rows,
    sweep_cauchy_davenport,
    sweep_dyson_invariants,
    sweep_kneser_bound,
    sweep_kneser_certificates,
    sweep_relativization,
    sweep_vosper,
)

__version__ = "0.1.0"
