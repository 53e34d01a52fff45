__version__ = "0.1.0"

from ._almostinv import (
    DualMeasure,
    GapReport,
    MeasureRepresentation,
    atom_laplacian,
    best_almost_invariant,
    combined_defect,
    dual_measure_rep,
    invariance_defect,
    is_shrinking,
    laplacian,
    tail_sets,
    thai1_obstruction,
    thai1_witnesses,
)
from ._dyadic import (
    DyadicStep,
    QSqrt2,
    bessel_divergence,
    bs12_relation,
    conjugation_identity,
    dilate,
    haar_gram,
    haar_system,
    haar_wavelet,
    inner_product,
    translate,
)
from ._eigensolver import eigh, jacobi_eigh
from ._exceptions import (
    CocycleError,
    DomainError,
    FramecraftError,
    GroupValidationError,
    InvalidSystemError,
    NotTotalError,
    NumericalFailureError,
    RepresentationError,
    SpecError,
)
from ._frames import (
    Classification,
    FrameReport,
    VectorSystem,
    analysis_operator,
    canonical_parseval,
    frame_operator,
    frame_report,
    gram_projection_defect,
    probe_frame_sums,
    span_bounds,
    spectral_truncation,
    standard_basis,
    synthesis_operator,
)
from ._groups import (
    Cocycle,
    CosetStructure,
    FiniteGroup,
    GroupMorphism,
    SubgroupEmbedding,
    check_cocycle_laws,
    cocycle_table,
    coset_structure,
    direct_product,
    find_isomorphism,
    semidirect_product,
    subgroup,
)
from ._induction import (
    InducedRep,
    dilate_frame_vector,
    framext_decomposition,
    induce,
    subset_lift,
    verify_framext,
)
from ._representations import (
    UnitaryRepresentation,
    abelian_dual,
    commutation_defect,
    direct_sum_power,
    fourier_unitary,
    left_regular,
    orbit_system,
    parseval_frame_vector,
    pullback,
    regular_embedding,
    trivial_representation,
    validate_representation,
)
from ._serialization import (
    parse_group_spec,
    parse_measure_spec,
    parse_representation,
    parse_subgroup_spec,
    parse_system_spec,
    render_json,
)
from .constructions import build_group, cyclic, dihedral, symmetric
from .families import family, _families as families, truncation_profile

__all__ = [
    "__version__",
    # frames
    "VectorSystem",
    "FrameReport",
    "Classification",
    "analysis_operator",
    "synthesis_operator",
    "frame_operator",
    "frame_report",
    "canonical_parseval",
    "spectral_truncation",
    "span_bounds",
    "gram_projection_defect",
    "probe_frame_sums",
    "standard_basis",
    "eigh",
    "jacobi_eigh",
    "families",
    "family",
    "truncation_profile",
    # groups
    "FiniteGroup",
    "GroupMorphism",
    "SubgroupEmbedding",
    "CosetStructure",
    "Cocycle",
    "subgroup",
    "coset_structure",
    "cocycle_table",
    "check_cocycle_laws",
    "direct_product",
    "semidirect_product",
    "find_isomorphism",
    "build_group",
    "cyclic",
    "dihedral",
    "symmetric",
    # representations
    "UnitaryRepresentation",
    "validate_representation",
    "left_regular",
    "trivial_representation",
    "orbit_system",
    "pullback",
    "direct_sum_power",
    "abelian_dual",
    "fourier_unitary",
    "commutation_defect",
    "parseval_frame_vector",
    "regular_embedding",
    "InducedRep",
    "induce",
    "dilate_frame_vector",
    "subset_lift",
    "verify_framext",
    "framext_decomposition",
    # almost invariant vectors
    "DualMeasure",
    "MeasureRepresentation",
    "GapReport",
    "dual_measure_rep",
    "laplacian",
    "invariance_defect",
    "combined_defect",
    "best_almost_invariant",
    "atom_laplacian",
    "thai1_witnesses",
    "is_shrinking",
    "tail_sets",
    "thai1_obstruction",
    # dyadic
    "QSqrt2",
    "DyadicStep",
    "inner_product",
    "translate",
    "dilate",
    "haar_wavelet",
    "haar_system",
    "haar_gram",
    "conjugation_identity",
    "bs12_relation",
    "bessel_divergence",
    # io
    "parse_system_spec",
    "parse_group_spec",
    "parse_subgroup_spec",
    "parse_measure_spec",
    "parse_representation",
    "render_json",
    # errors
    "FramecraftError",
    "InvalidSystemError",
    "NotTotalError",
    "NumericalFailureError",
    "GroupValidationError",
    "CocycleError",
    "DomainError",
    "RepresentationError",
    "SpecError",
]
