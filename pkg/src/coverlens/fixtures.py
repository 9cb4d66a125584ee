"""Embedded instances of the classical worked examples, shared by the CLI and tests."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import CoveringFamily
from .homothety import HomothetyInstance, InclusionMap
from .spaces import Axis, ClosedBox, FiniteMetricSpace, OpenBox, SliceSpace
from .values import Value


def discrete_space(n: int) -> FiniteMetricSpace:
    """n points with d(x, y) = 1 for x != y."""
    rows = [[Value.of(0 if i == j else 1) for j in range(n)] for i in range(n)]
    return FiniteMetricSpace.from_matrix(rows, labels=[f"x{i}" for i in range(n)])


def singleton_cover(space: FiniteMetricSpace) -> CoveringFamily:
    return CoveringFamily.over_finite(
        space, [(f"{{{lab}}}", {i}) for i, lab in enumerate(space.labels)])


def five_point_line() -> tuple[FiniteMetricSpace, CoveringFamily]:
    """Points 0..4 on a line with d = |i - j|, covered by {0,1,2} and {2,3,4}."""
    rows = [[Value.of(abs(i - j)) for j in range(5)] for i in range(5)]
    space = FiniteMetricSpace.from_matrix(rows, labels=[str(i) for i in range(5)])
    family = CoveringFamily.over_finite(space, [("U1", {0, 1, 2}), ("U2", {2, 3, 4})])
    return space, family


# ---- the two-box covering family of the unit square slab in 3-space ----

F = Fraction

BOX_CHAIN_AMBIENT = SliceSpace((Axis.line(), Axis.line(), Axis.line()))
BOX_CHAIN_PLANE = SliceSpace((Axis.line(), Axis.line(), Axis.point(0)))
BOX_CHAIN_SQUARE = SliceSpace((Axis.interval(0, 1), Axis.interval(0, 1), Axis.point(0)))
BOX_CHAIN_SUBSET = ClosedBox.make([(0, 1), (0, 1), (0, 0)])

_BOX_CHAIN_MEMBERS = [
    ("U1", OpenBox.make([(F(-1, 4), F(7, 8)), (F(-1, 4), F(5, 4)), (F(-1, 8), F(1, 8))])),
    ("U2", OpenBox.make([(F(1, 8), F(5, 4)), (F(-1, 4), F(5, 4)), (F(-1, 8), F(1, 8))])),
]


def box_chain_family(ambient: SliceSpace) -> CoveringFamily:
    return CoveringFamily.over_slice(ambient, _BOX_CHAIN_MEMBERS)


# ---- the plane-into-space embedding with its two-box family ----


@dataclass(frozen=True)
class EmbeddingFixture:
    instance: HomothetyInstance
    subset: ClosedBox  # the unit square in the plane
    family: CoveringFamily  # the two boxes over 3-space


def plane_embedding_fixture() -> EmbeddingFixture:
    plane = SliceSpace((Axis.line(), Axis.line()))
    space3 = SliceSpace((Axis.line(), Axis.line(), Axis.line()))
    inst = HomothetyInstance(plane, space3, InclusionMap(2, 3, F(1)), F(1), F(1))
    subset = ClosedBox.make([(0, 1), (0, 1)])
    family = CoveringFamily.over_slice(space3, [
        ("W1", OpenBox.make([(F(-1, 4), F(3, 4)), (F(-1, 4), F(5, 4)), (F(-1, 8), F(1, 8))])),
        ("W2", OpenBox.make([(F(1, 4), F(5, 4)), (F(-1, 4), F(5, 4)), (F(-1, 8), F(1, 8))])),
    ])
    return EmbeddingFixture(inst, subset, family)
