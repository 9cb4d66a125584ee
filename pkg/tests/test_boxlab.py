from fractions import Fraction

import pytest

from coverlens import fixtures
from coverlens.boxlab import (
    box_ball_refinement,
    box_coverage,
    box_diam,
    box_lebesgue_relative,
    box_mesh,
    box_mesh_at,
    build_truncated_scenario,
    member_geometry,
    open_box_coverage,
    slice_dist_to_complement,
    truncated_family_lebesgue,
)
from coverlens.covers import CoveringFamily, is_covering_family
from coverlens.errors import AmbientMismatchError, NotACoveringFamilyError
from coverlens.spaces import Axis, ClosedBox, OpenBox, SliceSpace
from coverlens.values import INF, Value

F = Fraction


def test_dist_to_complement_in_full_space():
    # z-margin 1/8 caps the distance from the slab center
    u1 = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT).members[0]
    d = slice_dist_to_complement(
        fixtures.BOX_CHAIN_AMBIENT, (F(1, 2), F(1, 2), 0), u1)
    assert d == Value.of(F(1, 8))


def test_dist_to_complement_in_plane_slice():
    # with z fixed at 0 the z-coordinate contributes infinity; x-margin 3/8 rules
    u1 = fixtures.box_chain_family(fixtures.BOX_CHAIN_PLANE).members[0]
    d = slice_dist_to_complement(
        fixtures.BOX_CHAIN_PLANE, (F(1, 2), F(1, 2), 0), u1)
    assert d == Value.of(F(3, 8))


def test_dist_to_complement_infinite_when_box_swallows_slice():
    slc = SliceSpace((Axis.interval(0, 1),))
    box = OpenBox.make([(-1, 2)])
    assert slice_dist_to_complement(slc, (F(1, 2),), box) == INF


def test_dist_to_complement_outside_point_rejected():
    slc = SliceSpace((Axis.interval(0, 1),))
    with pytest.raises(AmbientMismatchError):
        slice_dist_to_complement(slc, (F(2),), OpenBox.make([(0, 1)]))


def test_box_coverage_by_itself():
    ok, _ = box_coverage([(F(0), F(1))], [[(F(0), F(1))]])
    assert ok


def test_box_coverage_split_interval():
    ok, _ = box_coverage([(F(0), F(1))], [[(F(0), F(1, 2))], [(F(1, 2), F(1))]])
    assert ok


def test_box_coverage_missing_corner_witness():
    a = [(F(0), F(1)), (F(0), F(1))]
    parts = [
        [(F(0), F(1)), (F(0), F(1, 2))],
        [(F(0), F(1, 2)), (F(0), F(1))],
    ]
    ok, witness = box_coverage(a, parts)
    assert not ok
    assert witness == (F(3, 4), F(3, 4))


def test_open_coverage_catches_boundary():
    # closed target, open parts: the shared endpoint is uncovered
    ok, witness = open_box_coverage(
        [(F(0), F(2))], [[(F(-1), F(1))], [(F(1), F(3))]])
    assert not ok
    assert witness == (F(1),)


def test_covering_family_checks():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    assert is_covering_family(fam, fixtures.BOX_CHAIN_SUBSET).covered

    only_u2 = CoveringFamily.over_slice(
        fixtures.BOX_CHAIN_AMBIENT, [("U2", fam.members[1])])
    check = is_covering_family(only_u2, fixtures.BOX_CHAIN_SUBSET)
    assert not check.covered
    assert check.witness[0] <= F(1, 8)


# ---- the three ambient values of the box-chain fixture ----


def test_box_chain_value_in_full_space():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    res = box_lebesgue_relative(fixtures.BOX_CHAIN_AMBIENT, fam, fixtures.BOX_CHAIN_SUBSET)
    assert res.value == Value.of(F(1, 8))


def test_box_chain_value_in_plane():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_PLANE)
    res = box_lebesgue_relative(fixtures.BOX_CHAIN_PLANE, fam, fixtures.BOX_CHAIN_SUBSET)
    assert res.value == Value.of(F(1, 4))


def test_box_chain_value_intrinsic():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_SQUARE)
    res = box_lebesgue_relative(fixtures.BOX_CHAIN_SQUARE, fam, fixtures.BOX_CHAIN_SUBSET)
    assert res.value == Value.of(F(3, 8))


def test_box_lebesgue_infinite_for_swallowing_member():
    slc = SliceSpace((Axis.interval(0, 1),))
    fam = CoveringFamily.over_slice(slc, [("U", OpenBox.make([(-1, 2)]))])
    res = box_lebesgue_relative(slc, fam, ClosedBox.make([(0, 1)]))
    assert res.value == INF
    assert res.certificate is None


def test_box_lebesgue_requires_coverage():
    slc = SliceSpace((Axis.interval(0, 1),))
    fam = CoveringFamily.over_slice(slc, [("U", OpenBox.make([(F(1, 2), 2)]))])
    with pytest.raises(NotACoveringFamilyError):
        box_lebesgue_relative(slc, fam, ClosedBox.make([(0, 1)]))


def test_box_lebesgue_certificate_is_uncovered_above_the_optimum():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_PLANE)
    res = box_lebesgue_relative(fixtures.BOX_CHAIN_PLANE, fam, fixtures.BOX_CHAIN_SUBSET)
    assert res.certificate is not None
    # the witness lies in the subset and its pointwise value is below the next candidate
    x = res.certificate
    assert fixtures.BOX_CHAIN_SUBSET.contains(x)


def test_degenerate_subset_gives_pointwise_value():
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    point = ClosedBox.make([(F(1, 2), F(1, 2))] * 2 + [(0, 0)])
    res = box_lebesgue_relative(fixtures.BOX_CHAIN_AMBIENT, fam, point)
    assert res.value == Value.of(F(1, 8))


# ---- mesh ----


def test_mesh_of_the_plane_pullback_family():
    fx = fixtures.plane_embedding_fixture()
    plane = fx.instance.domain
    fam = CoveringFamily.over_slice(plane, [
        ("U1", OpenBox.make([(F(-1, 4), F(3, 4)), (F(-1, 4), F(5, 4))])),
        ("U2", OpenBox.make([(F(1, 4), F(5, 4)), (F(-1, 4), F(5, 4))])),
    ])
    assert box_mesh(plane, fam) == Value.sqrt(F(13, 4))


def test_mesh_of_the_slab_family_in_3_space():
    fx = fixtures.plane_embedding_fixture()
    assert box_mesh(fx.instance.codomain, fx.family) == Value.sqrt(F(53, 16))


def test_mesh_unbounded_member():
    slc = SliceSpace((Axis.line(), Axis.line()))
    fam = CoveringFamily.over_slice(slc, [("U", OpenBox.make([(None, None), (0, 1)]))])
    assert box_mesh(slc, fam) == INF


def test_mesh_at_counts_only_containing_members():
    fx = fixtures.plane_embedding_fixture()
    plane = fx.instance.domain
    fam = CoveringFamily.over_slice(plane, [
        ("U1", OpenBox.make([(F(-1, 4), F(3, 4)), (F(-1, 4), F(5, 4))])),
        ("U2", OpenBox.make([(F(1, 4), F(5, 4)), (F(-1, 4), F(5, 4))])),
    ])
    assert box_mesh_at(plane, fam, (0, 0)) == Value.sqrt(F(13, 4))


def test_box_diam_respects_norm():
    box = OpenBox.make([(0, 1), (0, 2)])
    assert box_diam(SliceSpace((Axis.line(), Axis.line()), norm="linf"), box) == Value.of(2)
    assert box_diam(SliceSpace((Axis.line(), Axis.line()), norm="l1"), box) == Value.of(3)
    assert box_diam(SliceSpace((Axis.line(), Axis.line())), box) == Value.sqrt(5)


def test_member_geometry_dead_detection():
    slc = SliceSpace((Axis.interval(0, 1), Axis.point(0)))
    assert member_geometry(slc, OpenBox.make([(2, 3), (-1, 1)])).dead
    assert member_geometry(slc, OpenBox.make([(0, 1), (1, 2)])).dead
    assert not member_geometry(slc, OpenBox.make([(0, 1), (-1, 1)])).dead


# ---- truncated scenarios ----


@pytest.mark.parametrize("n", [4, 8, 16, 64])
def test_interval_tail_exact_value(n):
    assert truncated_family_lebesgue(n, "interval-tail") == Value.of(F(1, 2) - F(1, n))


def test_interval_tail_strictly_increases_with_n():
    vals = [truncated_family_lebesgue(n, "interval-tail") for n in (4, 8, 16, 64)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_interval_tail_custom_subset():
    v = truncated_family_lebesgue(8, "interval-tail",
                                  ClosedBox.make([(F(2, 3), F(3, 4))]))
    assert v == Value.of(F(2, 3) - F(1, 8))


def test_unknown_scenario_rejected():
    with pytest.raises(ValueError):
        build_truncated_scenario("nope", 4)
    with pytest.raises(ValueError):
        build_truncated_scenario("interval-tail", 1)


def test_ball_tail_value():
    # largest truncated radius 1 - 1/n minus half the grid spacing
    for n in (4, 8):
        assert truncated_family_lebesgue(n, "ball-tail") == Value.of(1 - F(3, 2 * n))


def test_ball_tail_refinement_boundary():
    n = 4
    fx = build_truncated_scenario("ball-tail", n)
    fam = CoveringFamily.over_slice(fx.slice, list(zip(fx.names, fx.boxes)))
    level = 1 - F(3, 2 * n)
    assert truncated_family_lebesgue(n, "ball-tail") == Value.of(level)
    for r in (F(0), F(1, 4), F(1, 2), level - F(1, 100)):
        ok, _ = box_ball_refinement(fx.slice, fam, fx.default_subset, r)
        assert ok, f"radius {r} below the value must fit"
    ok, witness = box_ball_refinement(fx.slice, fam, fx.default_subset, level)
    assert not ok
    assert witness is not None
