"""Twisted Fock bimodules over matrix-algebra bases, at finite cutoff.

Everything is represented as concrete matrices: correspondences carry
explicit left/right actions together with a conjugation and a flow
generator, twists are Hermitian contractions on the two-particle space,
and the Fock construction produces the quotient isometries, field
operators, and weight needed to test modular and positivity statements
numerically.
"""

from .base_modular import BaseAlgebra, make_base, weight_value
from .correspondence import (
    AntiLinearOp,
    BohrDecomposition,
    Correspondence,
    RelTensor,
    Sector,
    TomitaCorrespondence,
    corrected_generator,
    disintegrate,
    left_symbol,
    lift_module_map,
    make_group,
    make_group_corr,
    make_multiplicity_corr,
    rel_tensor,
    right_symbol,
    validate_tomita,
)
from .errors import (
    BaseMismatch,
    BudgetExceeded,
    ConfigParse,
    ConfigSchema,
    DimensionMismatch,
    EigenrelationViolated,
    EquivarianceViolation,
    FlowConjugationMismatch,
    HypothesisViolation,
    IncompatibleTwist,
    InvolutionViolation,
    LevelMismatch,
    NormExceedsOne,
    NotAdjointClosed,
    NotATwist,
    NotHermitian,
    NotPositiveDefinite,
    NotRepresentation,
    QOutOfRange,
    RealityViolation,
    RoundTripMismatch,
    SectorNotInducedBimodule,
    SpectrumAsymmetric,
    TwistedFockError,
    VectorDimensionMismatch,
    WordTooLongForCutoff,
    ZeroJump,
)
from .fock import (
    FieldOperator,
    TwistedFock,
    build_fock,
    conditional_expectation,
    conj_intertwining_residual,
    crossed_product_check,
    fock_conjugation,
    fock_flow,
    fock_weight,
    kms_residual,
    locality_residual,
    make_field_left,
    make_field_right,
    modular_level1_residual,
    pi_left,
    pi_right,
    real_project_left,
    real_project_right,
    spectral_gap_experiment,
    type_I_factorization_check,
    vacuum_moment,
    vacuum_vector,
)
from .oracles import catalan, moment_oracle, pair_partitions, q_factorial
from .qms import (
    AlickiGenerator,
    BohrSpectrumReport,
    bohr_spectrum,
    cp_residual,
    generator_apply,
    gns_symmetry_residual,
    lindblad_super,
    make_alicki,
    qms_correspondence,
    semigroup,
)
from .twist import (
    GapConstants,
    Twist,
    TwistTower,
    build_tower,
    compatibility_residuals,
    gap_constants,
    lift_twist,
    make_twist,
    sandwich_bounds_report,
    ybe_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AlickiGenerator",
    "AntiLinearOp",
    "BaseAlgebra",
    "BaseMismatch",
    "BohrDecomposition",
    "BohrSpectrumReport",
    "BudgetExceeded",
    "ConfigParse",
    "ConfigSchema",
    "Correspondence",
    "DimensionMismatch",
    "EigenrelationViolated",
    "EquivarianceViolation",
    "FieldOperator",
    "FlowConjugationMismatch",
    "GapConstants",
    "HypothesisViolation",
    "IncompatibleTwist",
    "InvolutionViolation",
    "LevelMismatch",
    "NormExceedsOne",
    "NotATwist",
    "NotAdjointClosed",
    "NotHermitian",
    "NotPositiveDefinite",
    "NotRepresentation",
    "QOutOfRange",
    "RealityViolation",
    "RelTensor",
    "RoundTripMismatch",
    "Sector",
    "SectorNotInducedBimodule",
    "SpectrumAsymmetric",
    "TomitaCorrespondence",
    "Twist",
    "TwistTower",
    "TwistedFock",
    "TwistedFockError",
    "VectorDimensionMismatch",
    "WordTooLongForCutoff",
    "ZeroJump",
    "bohr_spectrum",
    "build_fock",
    "build_tower",
    "catalan",
    "compatibility_residuals",
    "conditional_expectation",
    "conj_intertwining_residual",
    "corrected_generator",
    "cp_residual",
    "crossed_product_check",
    "disintegrate",
    "fock_conjugation",
    "fock_flow",
    "fock_weight",
    "gap_constants",
    "generator_apply",
    "gns_symmetry_residual",
    "kms_residual",
    "left_symbol",
    "lift_module_map",
    "lift_twist",
    "lindblad_super",
    "locality_residual",
    "make_alicki",
    "make_base",
    "make_field_left",
    "make_field_right",
    "make_group",
    "make_group_corr",
    "make_multiplicity_corr",
    "make_twist",
    "modular_level1_residual",
    "moment_oracle",
    "pair_partitions",
    "pi_left",
    "pi_right",
    "q_factorial",
    "qms_correspondence",
    "real_project_left",
    "real_project_right",
    "rel_tensor",
    "right_symbol",
    "sandwich_bounds_report",
    "semigroup",
    "spectral_gap_experiment",
    "type_I_factorization_check",
    "validate_tomita",
    "vacuum_moment",
    "vacuum_vector",
    "weight_value",
]
