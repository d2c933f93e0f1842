"""Exact integer machinery for line bundles on weighted projective stacks.

The package computes graded section bases, semigroup generators, GIT
stable loci for diagonalizable group actions, and certified embedding
data that presents a weighted projective stack inside a larger one.
Everything is exact: plain Python integers, no floating point.
"""

from .errors import (
    ChartGenerationFailed,
    DomainError,
    InfiniteSolutionSet,
    InvalidEmbeddingData,
    NotDetAmple,
    NotPolynomial,
    RoundTripMismatch,
    SchemaViolation,
    StabilizerNotPreserved,
    VeryAmpleCertificationFailed,
)
from .lattice import (
    BOUNDARY,
    OUTSIDE,
    RELATIVE_INTERIOR,
    ConePosition,
    GradedSolutionSet,
    IntMatrix,
    SemigroupBasis,
    cone_position,
    dual_cone_generators,
    graded_sections,
    grlex_key,
    hilbert_basis,
    integer_kernel,
    is_nonneg_combination,
    lattice_spans,
    matrix_rank,
    minimal_homogeneous_solutions,
    positive_functional,
    primitive,
    sort_monomials,
)
from .wps import (
    LineBundle,
    Stratum,
    WeightSystem,
    descent_modulus,
    hilbert_series,
    is_det_ample,
    is_faithful,
    is_h_ample,
    section_basis,
    strata,
)
from .git import (
    CHI_ON_BOUNDARY,
    CHI_OUTSIDE_CONE,
    NOT_STABLE,
    STABILIZER_INFINITE,
    STABLE,
    CharacterAction,
    ChartReport,
    ProjPresentation,
    StabilityCertificate,
    StableLocus,
    is_polynomial,
    is_stable_support,
    proj_presentation,
    representation_degree,
    stability_power_invariance,
    stable_locus,
)
from .embed import (
    Certification,
    ChartCheck,
    EmbeddingData,
    MorphismReport,
    RecoveryReport,
    StratumCheck,
    VerifyReport,
    find_embedding_data,
    morphism_from_sections,
    recover_data,
    verify_immersion,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY",
    "CHI_ON_BOUNDARY",
    "CHI_OUTSIDE_CONE",
    "Certification",
    "CharacterAction",
    "ChartCheck",
    "ChartGenerationFailed",
    "ChartReport",
    "ConePosition",
    "DomainError",
    "EmbeddingData",
    "GradedSolutionSet",
    "InfiniteSolutionSet",
    "IntMatrix",
    "InvalidEmbeddingData",
    "LineBundle",
    "MorphismReport",
    "NOT_STABLE",
    "NotDetAmple",
    "NotPolynomial",
    "OUTSIDE",
    "ProjPresentation",
    "RELATIVE_INTERIOR",
    "RecoveryReport",
    "RoundTripMismatch",
    "STABILIZER_INFINITE",
    "STABLE",
    "SchemaViolation",
    "SemigroupBasis",
    "StabilityCertificate",
    "StabilizerNotPreserved",
    "StableLocus",
    "Stratum",
    "StratumCheck",
    "VerifyReport",
    "VeryAmpleCertificationFailed",
    "WeightSystem",
    "cone_position",
    "descent_modulus",
    "dual_cone_generators",
    "find_embedding_data",
    "graded_sections",
    "grlex_key",
    "hilbert_basis",
    "hilbert_series",
    "integer_kernel",
    "is_det_ample",
    "is_faithful",
    "is_h_ample",
    "is_nonneg_combination",
    "is_polynomial",
    "is_stable_support",
    "lattice_spans",
    "matrix_rank",
    "minimal_homogeneous_solutions",
    "morphism_from_sections",
    "positive_functional",
    "primitive",
    "proj_presentation",
    "recover_data",
    "representation_degree",
    "section_basis",
    "sort_monomials",
    "stability_power_invariance",
    "stable_locus",
    "strata",
    "verify_immersion",
]
