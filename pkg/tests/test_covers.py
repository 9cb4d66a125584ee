from fractions import Fraction

import pytest

from coverlens import fixtures
from coverlens.covers import (
    CoveringFamily,
    family_from_json,
    family_to_json,
    is_covering_family,
    mesh,
    mesh_at,
    multiplicity,
    restrict,
    subcover_check,
)
from coverlens.errors import AmbientMismatchError
from coverlens.spaces import Axis, ClosedBox, FiniteMetricSpace, OpenBox, SliceSpace
from coverlens.values import Value

F = Fraction


def line_space(n):
    rows = [[Value.of(abs(i - j)) for j in range(n)] for i in range(n)]
    return FiniteMetricSpace.from_matrix(rows, labels=[str(i) for i in range(n)])


def test_whole_space_member_covers():
    space = line_space(4)
    fam = CoveringFamily.over_finite(space, [("X", range(4))])
    assert is_covering_family(fam, space.all_points()).covered


def test_uncovered_point_witnessed():
    space = line_space(3)
    fam = CoveringFamily.over_finite(space, [("U", {0, 1})])
    check = is_covering_family(fam, space.all_points())
    assert not check.covered
    assert check.witness == 2


def test_restrict_to_full_space_is_identity():
    space, fam = fixtures.five_point_line()
    same = restrict(fam, space.all_points())
    assert same.names == fam.names
    assert same.members == fam.members


def test_restrict_drops_empty_members_with_note():
    space = line_space(4)
    fam = CoveringFamily.over_finite(space, [("U", {0, 1}), ("V", {3})])
    res = restrict(fam, {0, 1})
    assert res.names == ("U",)
    assert any("dropped" in n for n in res.notes)


def test_restrict_finite_reindexes():
    space = line_space(3)
    fam = CoveringFamily.over_finite(space, [("U", {1, 2}), ("V", {0, 1})])
    res = restrict(fam, {1})
    assert all(m == frozenset({0}) for m in res.members)


def test_restrict_slice_clips_ambient():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    res = restrict(fam, fixtures.BOX_CHAIN_SUBSET)
    assert res.ambient.axes[0] == Axis.interval(0, 1)
    assert res.ambient.axes[2] == Axis.point(0)
    assert len(res) == 2


def test_mesh_of_singleton_cover_is_zero():
    space = fixtures.discrete_space(4)
    fam = fixtures.singleton_cover(space)
    assert mesh(fam) == Value.of(0)


def test_mesh_at_plane_family():
    # only the first box contains the origin, so its diameter is the answer
    plane = SliceSpace((Axis.line(), Axis.line()))
    fam = CoveringFamily.over_slice(plane, [
        ("U1", OpenBox.make([(F(-1, 4), F(3, 4)), (F(-1, 4), F(5, 4))])),
        ("U2", OpenBox.make([(F(1, 4), F(5, 4)), (F(-1, 4), F(5, 4))])),
    ])
    assert mesh_at(fam, (0, 0)) == Value.sqrt(F(13, 4))
    assert mesh_at(fam, (F(1, 2), F(1, 2))) == Value.sqrt(F(13, 4))


def test_mesh_at_uncovered_point_is_zero():
    space = line_space(3)
    fam = CoveringFamily.over_finite(space, [("U", {0, 1})])
    assert mesh_at(fam, 2) == Value.of(0)


def test_finite_mesh_is_sup_of_pointwise_mesh():
    space, fam = fixtures.five_point_line()
    assert mesh(fam) == max(mesh_at(fam, x) for x in range(5))


def test_multiplicity_examples():
    space = line_space(3)
    disjoint = CoveringFamily.over_finite(space, [("A", {0}), ("B", {1, 2})])
    assert multiplicity(disjoint) == 1
    doubled = CoveringFamily.over_finite(space, [("A", range(3)), ("B", range(3))])
    assert multiplicity(doubled) == 2
    fam = CoveringFamily.over_finite(space, [("A", {0, 1}), ("B", {1, 2}), ("C", {1})])
    assert multiplicity(fam) == 3


def test_multiplicity_unsupported_on_slices():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    with pytest.raises(AmbientMismatchError):
        multiplicity(fam)


def test_subcover_check():
    space = line_space(3)
    fam = CoveringFamily.over_finite(
        space, [("A", {0, 1}), ("B", {1, 2}), ("C", {2})])
    sub = CoveringFamily.over_finite(space, [("A", {0, 1}), ("B", {1, 2})])
    assert subcover_check(fam, fam)
    assert subcover_check(fam, sub)
    not_sub = CoveringFamily.over_finite(space, [("D", {0, 2})])
    assert not subcover_check(fam, not_sub)
    gappy = CoveringFamily.over_finite(space, [("A", {0, 1})])
    assert not subcover_check(fam, gappy)


def test_subcover_check_on_slices():
    slc = SliceSpace((Axis.interval(0, 1),))
    u = OpenBox.make([(F(-1, 2), F(3, 4))])
    v = OpenBox.make([(F(1, 2), F(3, 2))])
    fam = CoveringFamily.over_slice(slc, [("U", u), ("V", v)])
    assert subcover_check(fam, fam)
    partial = CoveringFamily.over_slice(slc, [("U", u)])
    assert not subcover_check(fam, partial)  # loses [3/4, 1]


def test_empty_member_flagged_at_load():
    space = line_space(3)
    fam = CoveringFamily.over_finite(space, [("U", range(3)), ("E", ())])
    assert any("empty" in note for note in fam.notes)
    slc = SliceSpace((Axis.interval(0, 1),))
    fam2 = CoveringFamily.over_slice(
        slc, [("U", OpenBox.make([(0, 1)])), ("E", OpenBox.make([(2, 3)]))])
    assert any("misses the slice" in note for note in fam2.notes)


def test_family_json_round_trip():
    space, fam = fixtures.five_point_line()
    doc = family_to_json(fam)
    back = family_from_json(doc, space)
    assert back.members == fam.members

    slab = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    doc2 = family_to_json(slab)
    assert doc2["members"][0]["box"][0] == ["-1/4", "7/8"]
    back2 = family_from_json(doc2, fixtures.BOX_CHAIN_AMBIENT)
    assert back2.members == slab.members


def test_family_json_unbounded_ends_are_null():
    slc = SliceSpace((Axis.line(),))
    fam = CoveringFamily.over_slice(slc, [("U", OpenBox.make([(0, None)]))])
    doc = family_to_json(fam)
    assert doc["members"][0]["box"] == [["0", None]]
    back = family_from_json(doc, slc)
    assert back.members == fam.members
