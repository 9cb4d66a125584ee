"""Quasi-homothetic maps: verification, parameter fitting, pullbacks and transport bounds.

A map h multiplies every distance by a factor confined to [R/lambda, lambda*R].
All parameter handling is in squared form (lambda_sq, R_sq rational), so the
pairwise condition

    (R_sq / lambda_sq) * d^2  <=  d'^2  <=  (lambda_sq * R_sq) * d^2

is fully rational, and transported quantities are compared through
``Value.scale_sq`` without ever forming the irrational factor lambda*R itself.

The transport check computes mesh and relative Lebesgue values on both sides
of the map, with the codomain-side ambient selectable: the image of the domain
(where both transport inequalities hold for every verified map) or the full
codomain (where the lower Lebesgue bound and upper mesh bound can fail —
complements taken in a larger ambient only get closer).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import boxlab
from .covers import CoveringFamily, mesh
from .errors import (
    AmbientMismatchError,
    NonInjectiveMapError,
    NotACoveringFamilyError,
)
from .lebesgue import lebesgue_relative
from .spaces import (
    Axis,
    ClosedBox,
    FiniteMetricSpace,
    OpenBox,
    SliceSpace,
    induced_subspace,
)
from .values import Value, as_fraction


# ============================================================
# Map descriptions and instances
# ============================================================


@dataclass(frozen=True)
class ExplicitMap:
    """A total point correspondence between finite spaces: targets[i] is the image of i."""

    targets: tuple[int, ...]

    @property
    def is_injective(self) -> bool:
        return len(set(self.targets)) == len(self.targets)


@dataclass(frozen=True)
class InclusionMap:
    """x -> (c*x_1, ..., c*x_m, 0, ..., 0): coordinate inclusion after a rational dilation."""

    domain_dim: int
    codomain_dim: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if self.scale <= 0:
            raise ValueError("dilation scale must be positive")
        if self.domain_dim > self.codomain_dim:
            raise ValueError("inclusion cannot decrease dimension")


Mapping = Union[ExplicitMap, InclusionMap]


@dataclass(frozen=True)
class HomothetyInstance:
    domain: Union[FiniteMetricSpace, SliceSpace]
    codomain: Union[FiniteMetricSpace, SliceSpace]
    mapping: Mapping
    lambda_sq: Fraction
    R_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lambda_sq", as_fraction(self.lambda_sq))
        object.__setattr__(self, "R_sq", as_fraction(self.R_sq))
        if self.lambda_sq < 1:
            raise ValueError("lambda_sq must be at least 1")
        if self.R_sq <= 0:
            raise ValueError("R_sq must be positive")

    @property
    def lower_sq(self) -> Fraction:
        return self.R_sq / self.lambda_sq

    @property
    def upper_sq(self) -> Fraction:
        return self.lambda_sq * self.R_sq


def _check_inclusion_shape(inst: HomothetyInstance) -> InclusionMap:
    m = inst.mapping
    dom, cod = inst.domain, inst.codomain
    if not (isinstance(dom, SliceSpace) and isinstance(cod, SliceSpace)):
        raise AmbientMismatchError("inclusion maps need slice spaces on both sides")
    if dom.dim != m.domain_dim or cod.dim != m.codomain_dim:
        raise AmbientMismatchError("inclusion dimensions do not match the slices")
    c = m.scale
    for i, ax in enumerate(dom.axes):
        target = cod.axes[i]
        if ax.kind == "line":
            if target.kind != "line":
                raise AmbientMismatchError(f"coordinate {i}: image of a line needs a line axis")
        elif ax.kind == "interval":
            if not (target.contains(c * ax.lo) and target.contains(c * ax.hi)):
                raise AmbientMismatchError(f"coordinate {i}: scaled interval leaves the codomain axis")
        else:
            if not target.contains(c * ax.at):
                raise AmbientMismatchError(f"coordinate {i}: scaled point leaves the codomain axis")
    for k in range(m.domain_dim, m.codomain_dim):
        if not cod.axes[k].contains(Fraction(0)):
            raise AmbientMismatchError(f"coordinate {k}: codomain axis does not contain 0")
    return m


# ============================================================
# Verification and fitting
# ============================================================


@dataclass(frozen=True)
class HomothetyCheck:
    ok: bool
    injective: bool
    witness: Optional[tuple[str, str]] = None
    detail: str = ""


def verify_homothety(inst: HomothetyInstance) -> HomothetyCheck:
    """Check the two-sided squared distance bounds over all pairs.

    For explicit finite maps the returned witness is the pair with the largest
    violation (ties broken by point order); a collapsed pair always violates
    the lower bound.  Inclusion maps scale every distance by exactly their
    dilation factor, so the check reduces to the bound on the squared scale.
    """
    if isinstance(inst.mapping, InclusionMap):
        m = _check_inclusion_shape(inst)
        c_sq = m.scale * m.scale
        ok = inst.lower_sq <= c_sq <= inst.upper_sq
        detail = "" if ok else (
            f"squared scale {c_sq} outside [{inst.lower_sq}, {inst.upper_sq}]")
        return HomothetyCheck(ok, True, None, detail)

    dom, cod = inst.domain, inst.codomain
    if not (isinstance(dom, FiniteMetricSpace) and isinstance(cod, FiniteMetricSpace)):
        raise AmbientMismatchError("explicit maps need finite spaces on both sides")
    targets = inst.mapping.targets
    if len(targets) != len(dom):
        raise AmbientMismatchError("map must be total on the domain")
    if targets and max(targets) >= len(cod):
        raise AmbientMismatchError("map targets leave the codomain")
    injective = inst.mapping.is_injective
    worst: Optional[tuple[Fraction, int, int]] = None
    for i in range(len(dom)):
        for j in range(i + 1, len(dom)):
            d_sq = dom.rad[i][j]
            img_sq = cod.rad[targets[i]][targets[j]]
            violation = max(inst.lower_sq * d_sq - img_sq,
                            img_sq - inst.upper_sq * d_sq)
            if violation > 0 and (worst is None or violation > worst[0]):
                worst = (violation, i, j)
    if worst is None:
        return HomothetyCheck(True, injective)
    _, i, j = worst
    return HomothetyCheck(
        False, injective, (dom.labels[i], dom.labels[j]),
        f"d^2 = {dom.rad[i][j]}, image d^2 = {cod.rad[targets[i]][targets[j]]}")


@dataclass(frozen=True)
class FitResult:
    """The least feasible stretch for a given injective map.

    With rho_sq ranging over squared distance ratios, the minimal lambda
    satisfies lambda^4 = rho_sq_max / rho_sq_min, so ``lambda_sq_min`` is a
    Value (possibly irrational); at that lambda the feasible R_sq interval
    degenerates to sqrt(rho_sq_max * rho_sq_min).
    """

    lambda_sq_min: Value
    r_sq_at_min: Value
    rho_sq_min: Fraction
    rho_sq_max: Fraction

    def feasible_r_sq(self, lambda_sq: Fraction) -> Optional[tuple[Fraction, Fraction]]:
        """The feasible [R_sq_lo, R_sq_hi] at a rational lambda_sq, or None if empty."""
        lam = as_fraction(lambda_sq)
        lo, hi = self.rho_sq_max / lam, lam * self.rho_sq_min
        return None if lo > hi else (lo, hi)


def fit_homothety(domain: FiniteMetricSpace, codomain: FiniteMetricSpace,
                  mapping: ExplicitMap) -> FitResult:
    if len(domain) < 2:
        raise ValueError("fitting needs at least one pair of points")
    targets = mapping.targets
    if len(targets) != len(domain):
        raise AmbientMismatchError("map must be total on the domain")
    rho_min = rho_max = None
    for i in range(len(domain)):
        for j in range(i + 1, len(domain)):
            d_sq = domain.rad[i][j]
            img_sq = codomain.rad[targets[i]][targets[j]]
            if img_sq == 0:
                raise NonInjectiveMapError(
                    f"map collapses {domain.labels[i]!r} and {domain.labels[j]!r}")
            rho = img_sq / d_sq
            rho_min = rho if rho_min is None else min(rho_min, rho)
            rho_max = rho if rho_max is None else max(rho_max, rho)
    return FitResult(
        lambda_sq_min=Value.sqrt(rho_max / rho_min),
        r_sq_at_min=Value.sqrt(rho_max * rho_min),
        rho_sq_min=rho_min,
        rho_sq_max=rho_max,
    )


# ============================================================
# Images and pullbacks
# ============================================================


def image_points(inst: HomothetyInstance) -> tuple[int, ...]:
    return tuple(sorted(set(inst.mapping.targets)))


def image_space(inst: HomothetyInstance) -> Union[FiniteMetricSpace, SliceSpace]:
    """h(Z) with the induced metric; requires a verified instance."""
    check = verify_homothety(inst)
    if not check.ok:
        raise ValueError(f"instance fails verification: {check.detail}")
    if isinstance(inst.mapping, ExplicitMap):
        return induced_subspace(inst.codomain, image_points(inst))
    m = inst.mapping
    c = m.scale
    axes = []
    for ax in inst.domain.axes:
        if ax.kind == "line":
            axes.append(Axis.line())
        elif ax.kind == "interval":
            axes.append(Axis.interval(c * ax.lo, c * ax.hi))
        else:
            axes.append(Axis.point(c * ax.at))
    axes.extend(Axis.point(0) for _ in range(m.domain_dim, m.codomain_dim))
    return SliceSpace(tuple(axes), norm=inst.codomain.norm)


def map_subset(inst: HomothetyInstance, subset):
    """The image h(V) of a domain subset, expressed in codomain terms."""
    if isinstance(inst.mapping, ExplicitMap):
        return frozenset(inst.mapping.targets[i] for i in subset)
    m = inst.mapping
    if not isinstance(subset, ClosedBox) or subset.dim != m.domain_dim:
        raise AmbientMismatchError("inclusion maps take closed-box subsets of the domain")
    c = m.scale
    ivs = [(c * lo, c * hi) for lo, hi in subset.intervals]
    ivs.extend((Fraction(0), Fraction(0)) for _ in range(m.domain_dim, m.codomain_dim))
    return ClosedBox(tuple(ivs))


def pullback(inst: HomothetyInstance, family: CoveringFamily) -> CoveringFamily:
    """Member-by-member preimage of a codomain-side family, over the domain ambient.

    Names gain an "h⁻¹" prefix; members with empty preimage are dropped with a
    note (their boxes miss the image, or no domain point maps into them).
    """
    if family.ambient != inst.codomain:
        raise AmbientMismatchError("pullback expects a family over the codomain")
    named = []
    notes = []
    if isinstance(inst.mapping, ExplicitMap):
        targets = inst.mapping.targets
        for name, member in family.named():
            pre = frozenset(i for i, t in enumerate(targets) if t in member)
            if not pre:
                notes.append(f"pullback dropped {name!r} (empty preimage)")
                continue
            named.append((f"h⁻¹({name})", pre))
        fam = CoveringFamily.over_finite(inst.domain, named)
    else:
        m = _check_inclusion_shape(inst)
        c = m.scale
        for name, box in family.named():
            if box.dim != m.codomain_dim:
                raise AmbientMismatchError(f"member {name!r} has the wrong dimension")
            tail_ok = all(
                (lo is None or lo < 0) and (hi is None or hi > 0)
                for lo, hi in box.intervals[m.domain_dim:]
            )
            if not tail_ok:
                notes.append(f"pullback dropped {name!r} (box misses the image)")
                continue
            ivs = [
                (None if lo is None else lo / c, None if hi is None else hi / c)
                for lo, hi in box.intervals[: m.domain_dim]
            ]
            named.append((f"h⁻¹({name})", OpenBox(tuple(ivs))))
        fam = CoveringFamily.over_slice(inst.domain, named)
    if notes:
        fam = CoveringFamily(fam.ambient, fam.names, fam.members, fam.notes + tuple(notes))
    return fam


def _rebind_to_image(inst: HomothetyInstance, family: CoveringFamily) -> CoveringFamily:
    """The same members viewed inside h(Z): reindexed point sets, or boxes over the image slice."""
    img = image_space(inst)
    if isinstance(inst.mapping, ExplicitMap):
        pts = image_points(inst)
        into = {old: new for new, old in enumerate(pts)}
        named = [
            (name, frozenset(into[p] for p in member if p in into))
            for name, member in family.named()
        ]
        return CoveringFamily.over_finite(img, named)
    return CoveringFamily.over_slice(img, list(family.named()))


# ============================================================
# Transport of mesh and Lebesgue values across the map
# ============================================================


@dataclass(frozen=True)
class TransportReport:
    ambient_mode: str  # "image" | "codomain"
    lambda_sq: Fraction
    R_sq: Fraction
    mesh_domain: Value
    mesh_codomain: Value
    leb_domain: Value
    leb_codomain: Value
    inequalities: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.inequalities)

    def failed_names(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.inequalities if not ok)


def _relative_value(family: CoveringFamily, subset) -> Value:
    if family.is_finite_backend:
        return lebesgue_relative(family, subset).value
    return boxlab.box_lebesgue_relative(family.ambient, family, subset).value


def transport_lemma_check(inst: HomothetyInstance, subset, family: CoveringFamily,
                          ambient_mode: str = "image") -> TransportReport:
    """Compare mesh and relative Lebesgue values across the map.

    ``family`` lives on the codomain side and must cover the image of
    ``subset`` in the selected ambient; its pullback covers ``subset`` in the
    domain.  Each of the four transported bounds is evaluated exactly in
    squared form.  The report records which ambient was assumed, since that
    choice is precisely what separates the always-valid bounds (image mode)
    from the refutable ones (codomain mode).
    """
    if ambient_mode not in ("image", "codomain"):
        raise ValueError(f"unknown ambient mode {ambient_mode!r}")
    check = verify_homothety(inst)
    if not check.ok:
        raise ValueError(f"instance fails verification: {check.detail}")

    h_subset = map_subset(inst, subset)
    if ambient_mode == "image":
        fam_t = _rebind_to_image(inst, family)
        if isinstance(inst.mapping, ExplicitMap):
            pts = image_points(inst)
            into = {old: new for new, old in enumerate(pts)}
            h_subset = frozenset(into[p] for p in h_subset)
    else:
        fam_t = family

    if fam_t.is_finite_backend:
        cov = [p for p in sorted(h_subset)
               if not any(p in m for m in fam_t.members)]
        if cov:
            raise NotACoveringFamilyError(fam_t.ambient.labels[cov[0]])
    else:
        witness = boxlab.covering_witness(fam_t.ambient, fam_t.members, h_subset)
        if witness is not None:
            raise NotACoveringFamilyError(witness)

    fam_u = pullback(inst, family)
    mesh_domain = mesh(fam_u)
    mesh_codomain = mesh(fam_t)
    leb_domain = _relative_value(fam_u, subset)
    leb_codomain = _relative_value(fam_t, h_subset)

    lo, hi = inst.lower_sq, inst.upper_sq
    ineqs = (
        ("(R/λ)·mesh(U) <= mesh(Ũ)", mesh_domain.scale_sq(lo) <= mesh_codomain),
        ("mesh(Ũ) <= λR·mesh(U)", mesh_codomain <= mesh_domain.scale_sq(hi)),
        ("(R/λ)·L(U,V) <= L(Ũ,hV)", leb_domain.scale_sq(lo) <= leb_codomain),
        ("L(Ũ,hV) <= λR·L(U,V)", leb_codomain <= leb_domain.scale_sq(hi)),
    )
    return TransportReport(
        ambient_mode, inst.lambda_sq, inst.R_sq,
        mesh_domain, mesh_codomain, leb_domain, leb_codomain, ineqs)


# ============================================================
# JSON forms
# ============================================================


def instance_to_json(inst: HomothetyInstance) -> dict:
    from .spaces import space_to_json

    if isinstance(inst.mapping, ExplicitMap):
        pairs = [
            [inst.domain.labels[i], inst.codomain.labels[t]]
            for i, t in enumerate(inst.mapping.targets)
        ]
        map_doc = {"type": "explicit", "pairs": pairs}
    else:
        map_doc = {
            "type": "inclusion",
            "dims": [inst.mapping.domain_dim, inst.mapping.codomain_dim],
            "scale": str(inst.mapping.scale),
        }
    return {
        "domain": space_to_json(inst.domain),
        "codomain": space_to_json(inst.codomain),
        "map": map_doc,
        "lambda_sq": str(inst.lambda_sq),
        "R_sq": str(inst.R_sq),
    }


def instance_from_json(doc: dict) -> HomothetyInstance:
    from .spaces import space_from_json

    domain = space_from_json(doc["domain"])
    codomain = space_from_json(doc["codomain"])
    map_doc = doc["map"]
    if map_doc["type"] == "explicit":
        assigned: dict[int, int] = {}
        for src, dst in map_doc["pairs"]:
            assigned[domain.index_of(src)] = codomain.index_of(dst)
        if len(assigned) != len(domain.labels):
            raise ValueError("explicit map must assign every domain point exactly once")
        mapping: Mapping = ExplicitMap(tuple(assigned[i] for i in range(len(domain.labels))))
    elif map_doc["type"] == "inclusion":
        dims = map_doc["dims"]
        mapping = InclusionMap(dims[0], dims[1], Fraction(map_doc.get("scale", "1")))
    else:
        raise ValueError(f"unknown map type {map_doc['type']!r}")
    return HomothetyInstance(domain, codomain, mapping,
                             Fraction(doc["lambda_sq"]), Fraction(doc["R_sq"]))
