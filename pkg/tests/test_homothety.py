from fractions import Fraction

import pytest

from coverlens import fixtures
from coverlens.covers import CoveringFamily
from coverlens.errors import NonInjectiveMapError, NotACoveringFamilyError
from coverlens.homothety import (
    ExplicitMap,
    HomothetyInstance,
    InclusionMap,
    fit_homothety,
    image_space,
    instance_from_json,
    instance_to_json,
    map_subset,
    pullback,
    transport_lemma_check,
    verify_homothety,
)
from coverlens.spaces import Axis, ClosedBox, FiniteMetricSpace, OpenBox, SliceSpace
from coverlens.values import Value

F = Fraction


def line_cloud(*positions):
    return FiniteMetricSpace.from_cloud([(p,) for p in positions], norm="l1")


def test_plane_inclusion_verifies_at_unit_parameters():
    fx = fixtures.plane_embedding_fixture()
    check = verify_homothety(fx.instance)
    assert check.ok and check.injective


def test_dilation_verifies():
    domain = line_cloud(0, 1, 3)
    codomain = domain.scaled(F(3, 2))
    inst = HomothetyInstance(domain, codomain, ExplicitMap((0, 1, 2)),
                             F(1), F(9, 4))
    assert verify_homothety(inst).ok


def test_collapsing_map_fails_with_witness():
    domain = line_cloud(0, 1)
    codomain = line_cloud(0, 1)
    inst = HomothetyInstance(domain, codomain, ExplicitMap((0, 0)), F(1), F(1))
    check = verify_homothety(inst)
    assert not check.ok
    assert not check.injective
    assert check.witness == ("p0", "p1")


def test_fit_exact_dilation():
    domain = line_cloud(0, 1, 3)
    codomain = domain.scaled(2)
    fit = fit_homothety(domain, codomain, ExplicitMap((0, 1, 2)))
    assert fit.lambda_sq_min == Value.of(1)
    assert fit.r_sq_at_min == Value.of(4)
    assert fit.feasible_r_sq(F(1)) == (F(4), F(4))


def test_fit_mixed_ratios():
    # ratios d'/d are 2, 1 and 4/3, so lambda^4 = 4 and R^2 pins to 2
    domain = line_cloud(0, 1, 3)
    codomain = line_cloud(0, 2, 4)
    fit = fit_homothety(domain, codomain, ExplicitMap((0, 1, 2)))
    assert fit.lambda_sq_min == Value.of(2)
    assert fit.r_sq_at_min == Value.of(2)
    assert fit.feasible_r_sq(F(2)) == (F(2), F(2))
    assert fit.feasible_r_sq(F(3, 2)) is None  # below the bound
    inst = HomothetyInstance(domain, codomain, ExplicitMap((0, 1, 2)), F(2), F(2))
    assert verify_homothety(inst).ok


def test_fit_rejects_collapse():
    domain = line_cloud(0, 1)
    codomain = line_cloud(0, 1)
    with pytest.raises(NonInjectiveMapError):
        fit_homothety(domain, codomain, ExplicitMap((0, 0)))


def test_pullback_of_identity_is_same_family():
    space = line_cloud(0, 1, 2)
    inst = HomothetyInstance(space, space, ExplicitMap((0, 1, 2)), F(1), F(1))
    fam = CoveringFamily.over_finite(space, [("U", {0, 1}), ("V", {1, 2})])
    back = pullback(inst, fam)
    assert back.members == fam.members
    assert back.names == ("h⁻¹(U)", "h⁻¹(V)")


def test_pullback_of_slab_boxes_projects():
    fx = fixtures.plane_embedding_fixture()
    fam_u = pullback(fx.instance, fx.family)
    assert fam_u.members[0] == OpenBox.make([(F(-1, 4), F(3, 4)), (F(-1, 4), F(5, 4))])
    assert fam_u.members[1] == OpenBox.make([(F(1, 4), F(5, 4)), (F(-1, 4), F(5, 4))])


def test_pullback_drops_members_missing_the_image():
    fx = fixtures.plane_embedding_fixture()
    extra = CoveringFamily.over_slice(fx.instance.codomain, [
        ("W1", fx.family.members[0]),
        ("far", OpenBox.make([(0, 1), (0, 1), (F(1, 4), F(1, 2))])),
    ])
    fam_u = pullback(fx.instance, extra)
    assert fam_u.names == ("h⁻¹(W1)",)
    assert any("dropped" in note for note in fam_u.notes)


def test_image_space_of_inclusion_is_the_plane_slab():
    fx = fixtures.plane_embedding_fixture()
    img = image_space(fx.instance)
    assert img.axes == (Axis.line(), Axis.line(), Axis.point(0))


def test_image_space_of_finite_isometry_is_isometric():
    domain = line_cloud(0, 1, 3)
    codomain = line_cloud(-1, 0, 1, 3, 7)
    inst = HomothetyInstance(domain, codomain, ExplicitMap((1, 2, 3)), F(1), F(1))
    img = image_space(inst)
    assert img.rad == domain.rad


def test_image_space_of_dilation_scales_distances():
    domain = line_cloud(0, 1, 3)
    codomain = domain.scaled(2)
    inst = HomothetyInstance(domain, codomain, ExplicitMap((0, 1, 2)), F(1), F(4))
    img = image_space(inst)
    assert img.distance(0, 2) == domain.distance(0, 2).scale(2)


def test_map_subset_inclusion():
    fx = fixtures.plane_embedding_fixture()
    hv = map_subset(fx.instance, fx.subset)
    assert hv == ClosedBox.make([(0, 1), (0, 1), (0, 0)])


# ---- the transport check ----


def test_transport_codomain_mode_flags_the_two_bad_bounds():
    fx = fixtures.plane_embedding_fixture()
    report = transport_lemma_check(fx.instance, fx.subset, fx.family,
                                   ambient_mode="codomain")
    assert report.leb_domain == Value.of(F(1, 4))
    assert report.leb_codomain == Value.of(F(1, 8))
    assert report.mesh_domain.radicand == F(13, 4)
    assert report.mesh_codomain.radicand == F(53, 16)
    assert not report.passed
    assert report.failed_names() == (
        "mesh(Ũ) <= λR·mesh(U)",
        "(R/λ)·L(U,V) <= L(Ũ,hV)",
    )


def test_transport_image_mode_passes_with_equality():
    fx = fixtures.plane_embedding_fixture()
    report = transport_lemma_check(fx.instance, fx.subset, fx.family,
                                   ambient_mode="image")
    assert report.passed
    assert report.leb_domain == report.leb_codomain == Value.of(F(1, 4))
    assert report.mesh_domain == report.mesh_codomain == Value.sqrt(F(13, 4))


def test_transport_finite_dilation_is_tight():
    domain = line_cloud(0, 1, 3)
    c = F(5, 2)
    codomain = domain.scaled(c)
    inst = HomothetyInstance(domain, codomain, ExplicitMap((0, 1, 2)), F(1), c * c)
    fam = CoveringFamily.over_finite(codomain, [("W1", {0, 1}), ("W2", {1, 2})])
    report = transport_lemma_check(inst, frozenset({0, 1, 2}), fam, "image")
    assert report.passed
    assert report.mesh_codomain == report.mesh_domain.scale(c)
    assert report.leb_codomain == report.leb_domain.scale(c)


def test_transport_requires_coverage():
    fx = fixtures.plane_embedding_fixture()
    partial = CoveringFamily.over_slice(
        fx.instance.codomain, [("W1", fx.family.members[0])])
    with pytest.raises(NotACoveringFamilyError):
        transport_lemma_check(fx.instance, fx.subset, partial, "codomain")


def test_instance_json_round_trip():
    fx = fixtures.plane_embedding_fixture()
    doc = instance_to_json(fx.instance)
    assert doc["map"] == {"type": "inclusion", "dims": [2, 3], "scale": "1"}
    back = instance_from_json(doc)
    assert back == fx.instance

    domain = line_cloud(0, 1, 3)
    codomain = line_cloud(0, 2, 4)
    inst = HomothetyInstance(domain, codomain, ExplicitMap((0, 1, 2)), F(2), F(2))
    back2 = instance_from_json(instance_to_json(inst))
    assert back2.mapping == inst.mapping
    assert back2.lambda_sq == F(2)
