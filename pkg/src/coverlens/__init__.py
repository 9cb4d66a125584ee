"""coverlens: exact Lebesgue numbers, meshes and quasi-homothety transport bounds for metric covers."""

from .values import INF, ZERO, Value
from .spaces import (
    Axis,
    ClosedBox,
    FiniteMetricSpace,
    OpenBox,
    SliceSpace,
    induced_subspace,
    validate_metric,
)
from .covers import CoveringFamily, is_covering_family, mesh, mesh_at, multiplicity, restrict, subcover_check
from .lebesgue import (
    ball_refinement_holds,
    chain_report,
    dist_to_complement,
    lebesgue_diam,
    lebesgue_rad,
    lebesgue_rad_at,
    lebesgue_relative,
    second_kind_relative,
)
from .boxlab import (
    box_ball_refinement,
    box_coverage,
    box_lebesgue_relative,
    box_mesh,
    slice_dist_to_complement,
    truncated_family_lebesgue,
)
from .homothety import (
    ExplicitMap,
    HomothetyInstance,
    InclusionMap,
    fit_homothety,
    image_space,
    pullback,
    transport_lemma_check,
    verify_homothety,
)

__version__ = "0.1.0"

__all__ = [
    "INF", "ZERO", "Value",
    "Axis", "ClosedBox", "FiniteMetricSpace", "OpenBox", "SliceSpace",
    "induced_subspace", "validate_metric",
    "CoveringFamily", "is_covering_family", "mesh", "mesh_at", "multiplicity",
    "restrict", "subcover_check",
    "ball_refinement_holds", "chain_report", "dist_to_complement",
    "lebesgue_diam", "lebesgue_rad", "lebesgue_rad_at", "lebesgue_relative",
    "second_kind_relative",
    "box_ball_refinement", "box_coverage", "box_lebesgue_relative", "box_mesh",
    "slice_dist_to_complement", "truncated_family_lebesgue",
    "ExplicitMap", "HomothetyInstance", "InclusionMap", "fit_homothety",
    "image_space", "pullback", "transport_lemma_check", "verify_homothety",
    "__version__",
]
