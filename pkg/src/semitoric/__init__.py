"""Exact tools for semi-toric boundary geometry.

The package computes, over exact rational and real quadratic arithmetic:
cusp cross-section chains and their resolution cycles, cone decompositions
with their validity conditions, boundary atlases for flat torus connections,
maximal unipotency of monodromy sets with quasi-canonical coordinates, and
framing changes of instanton series.
"""

from .connection import (
    BoundaryAtlas,
    CompatibilityReport,
    MaxDepthPoint,
    NondescentWitness,
    Reconstruction,
    atlas_from_fan,
    chart_transition,
    compatibility_check,
    disc_translation_pullback,
    flat_frame_transform,
    laurent_nabla,
    local_lattice,
    nondescent_witness,
    reconstruct,
    torus_nabla,
    torus_scaling_pullback,
)
from .cusp import (
    CycleResolution,
    VertexChain,
    build_fan,
    emit_figure,
    hull_vertices,
    self_intersections,
)
from .errors import (
    DegenerateInputError,
    FormatError,
    GroupMismatchError,
    MixedDiscriminantError,
    NotUnipotentError,
    RequiresRationalConeError,
    ResourceBoundError,
    SemitoricError,
    UnsupportedRankError,
)
from .fans import (
    AdmissibilityReport,
    Chart,
    Decomposition,
    GroupElement,
    Stratum,
    Support,
    ValidationReport,
    admissibility_check,
    boundary_chart,
    common_refinement,
    decompositions_match,
    is_mumford_type,
    is_refinement,
    sbb_decomposition,
    strata,
    validate_decomposition,
)
from .lattice import (
    Cone,
    ExactScalar,
    IntMatrix,
    Vector,
    complete_to_basis,
    cone_from_inequalities,
    cone_intersection,
    elementary_divisors,
    faces,
    hermite_normal_form,
    integer_kernel,
    is_strongly_convex,
    is_unimodular_part_of_basis,
    smith_normal_form,
)
from .monodromy import (
    MaxUnipotencyReport,
    MonodromySet,
    QuasiCanonicalCoordinates,
    integral_normalization,
    is_maximally_unipotent,
    m_matrix,
    minimal_polynomial,
    pairing,
    quasi_canonical_coordinates,
    unipotent_log,
    weight_spaces,
)
from .quadfield import (
    CuspData,
    QuadIdeal,
    cusp_cone,
    cusp_cone_normals,
    fundamental_totally_positive_unit,
    fundamental_unit,
    ring_basis,
    sqrtD,
    tube_coordinates,
)
from .series import (
    EffectivityReport,
    FormalSeries,
    Framing,
    effectivity_check,
    reframe,
    reframing_preserves_effectivity,
    series,
    series_add,
    series_multiply,
    series_truncate,
    standard_framing,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
