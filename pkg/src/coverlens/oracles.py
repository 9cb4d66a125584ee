"""Brute-force oracles and the seeded fuzz harness backing every invariant suite.

Instances are generated from per-trial RNGs derived deterministically from one
master seed, so identical configs reproduce identical instance streams and
violation lists.  Violations are first-class artifacts: each one serializes
the full instance plus expected/got values into a reproducer document.
"""
from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import boxlab, covers, homothety, lebesgue
from .covers import CoveringFamily
from .spaces import (
    Axis,
    ClosedBox,
    FiniteMetricSpace,
    OpenBox,
    SliceSpace,
    space_to_json,
    validate_metric,
)
from .values import INF, ZERO, Value


# ============================================================
# Configuration
# ============================================================


@dataclass(frozen=True)
class FuzzConfig:
    """Deterministic fuzzing parameters: same config, same instance stream."""

    seed: int = 0
    trials: int = 100
    kinds: tuple[str, ...] = ("finite", "box", "homothety")
    max_points_subset: int = 12  # bound for 2^n subset oracles
    max_points: int = 40
    large_share: float = 0.15
    denominator_bound: int = 8
    box_step: Fraction = Fraction(1, 16)


# ============================================================
# Instance generation
# ============================================================


def _rand_fraction(rng: random.Random, denom: int, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo * denom, hi * denom), rng.randint(1, denom))


def gen_matrix_space(rng: random.Random, n: int, denom: int) -> FiniteMetricSpace:
    """A random metric on n points: positive symmetric seeds repaired by
    all-pairs shortest paths (min-plus closure keeps everything rational)."""
    d = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = Fraction(rng.randint(1, 4 * denom), rng.randint(1, denom))
            d[i][j] = d[j][i] = w
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            for j in range(n):
                via = dik + d[k][j]
                if via < d[i][j]:
                    d[i][j] = via
    return FiniteMetricSpace.from_matrix([[Value.of(x) for x in row] for row in d])


def gen_cloud_space(rng: random.Random, n: int, denom: int) -> FiniteMetricSpace:
    dim = rng.randint(1, 3)
    norm = rng.choice(("euclidean", "linf", "l1"))
    pts: set[tuple] = set()
    while len(pts) < n:
        pts.add(tuple(_rand_fraction(rng, denom) for _ in range(dim)))
    return FiniteMetricSpace.from_cloud(sorted(pts), norm=norm)


def gen_finite_space(rng: random.Random, cfg: FuzzConfig) -> FiniteMetricSpace:
    if rng.random() < cfg.large_share:
        n = rng.randint(cfg.max_points_subset + 1, max(cfg.max_points_subset + 1, min(cfg.max_points, 24)))
    else:
        n = rng.randint(3, cfg.max_points_subset)
    if rng.random() < 0.5:
        return gen_matrix_space(rng, n, cfg.denominator_bound)
    return gen_cloud_space(rng, n, cfg.denominator_bound)


def gen_cover(rng: random.Random, space: FiniteMetricSpace) -> CoveringFamily:
    """A random cover of the whole space; every point is patched into a member."""
    n = len(space)
    k = rng.randint(2, 5)
    members = [set(p for p in range(n) if rng.random() < 0.45) for _ in range(k)]
    if rng.random() < 0.05:
        members[rng.randrange(k)] = set(range(n))
    for p in range(n):
        if not any(p in m for m in members):
            members[rng.randrange(k)].add(p)
    fam = CoveringFamily.over_finite(
        space, [(f"U{i + 1}", m) for i, m in enumerate(members) if m])
    assert covers.is_covering_family(fam, space.all_points()).covered
    return fam


def gen_nested_subsets(rng: random.Random, n: int) -> tuple[frozenset, frozenset]:
    b = frozenset(p for p in range(n) if rng.random() < 0.7) or frozenset({rng.randrange(n)})
    a = frozenset(p for p in b if rng.random() < 0.6) or frozenset({min(b)})
    return a, b


@dataclass(frozen=True)
class FiniteBundle:
    space: FiniteMetricSpace
    family: CoveringFamily
    a: frozenset
    b: frozenset
    scale: Fraction


def gen_finite_bundle(rng: random.Random, cfg: FuzzConfig) -> FiniteBundle:
    space = gen_finite_space(rng, cfg)
    family = gen_cover(rng, space)
    a, b = gen_nested_subsets(rng, len(space))
    scale = Fraction(rng.randint(1, 3 * cfg.denominator_bound), rng.randint(1, cfg.denominator_bound))
    return FiniteBundle(space, family, a, b, scale)


@dataclass(frozen=True)
class BoxBundle:
    slc: SliceSpace
    family: CoveringFamily
    a: ClosedBox


def gen_box_bundle(rng: random.Random, cfg: FuzzConfig) -> BoxBundle:
    denom = cfg.denominator_bound
    dim = rng.choice((1, 1, 2, 2, 3))
    axes = []
    for _ in range(dim):
        roll = rng.random()
        if roll < 0.4:
            axes.append(Axis.line())
        elif roll < 0.9:
            lo = _rand_fraction(rng, denom, -3, 0)
            axes.append(Axis.interval(lo, lo + Fraction(rng.randint(1, 3 * denom), denom)))
        else:
            axes.append(Axis.point(_rand_fraction(rng, denom)))
    slc = SliceSpace(tuple(axes), norm=rng.choice(("euclidean", "linf", "l1")))

    a_ivs = []
    for ax in slc.axes:
        if ax.kind == "point":
            a_ivs.append((ax.at, ax.at))
            continue
        lo = ax.lo if ax.kind == "interval" else Fraction(-2)
        hi = ax.hi if ax.kind == "interval" else Fraction(2)
        width = hi - lo
        alo = lo + width * Fraction(rng.randint(0, denom), 4 * denom)
        ahi = alo + width * Fraction(rng.randint(0, denom), 2 * denom)
        a_ivs.append((alo, min(ahi, hi)))
    a = ClosedBox.make(a_ivs)

    named = []
    for i in range(rng.randint(2, 4)):
        ivs = []
        for ax in slc.axes:
            center = _rand_fraction(rng, denom, -2, 2)
            half = Fraction(rng.randint(1, 3 * denom), denom)
            lo: Optional[Fraction] = center - half
            hi: Optional[Fraction] = center + half
            if rng.random() < 0.08:
                lo = None
            if rng.random() < 0.08:
                hi = None
            ivs.append((lo, hi))
        named.append((f"U{i + 1}", OpenBox.make(ivs)))
    if boxlab.covering_witness(slc, [b for _, b in named], a) is not None:
        pad = Fraction(rng.randint(1, 2 * denom), denom)
        patch = OpenBox.make([(lo - pad, hi + pad) for lo, hi in a.intervals])
        named.append(("patch", patch))
    family = CoveringFamily.over_slice(slc, named)
    assert boxlab.covering_witness(slc, family.members, a) is None
    return BoxBundle(slc, family, a)


@dataclass(frozen=True)
class HomothetyBundle:
    instance: homothety.HomothetyInstance
    subset: frozenset
    family: CoveringFamily
    is_dilation: bool
    dilation: Optional[Fraction] = None


def gen_homothety_bundle(rng: random.Random, cfg: FuzzConfig) -> HomothetyBundle:
    denom = cfg.denominator_bound
    n = rng.randint(3, 8)
    domain = (gen_matrix_space(rng, n, denom) if rng.random() < 0.5
              else gen_cloud_space(rng, n, denom))
    dilation = rng.random() < 0.3
    if dilation:
        c = Fraction(rng.randint(1, 3 * denom), rng.randint(1, denom))
        codomain = domain.scaled(c)
        mapping = homothety.ExplicitMap(tuple(range(n)))
        inst = homothety.HomothetyInstance(domain, codomain, mapping,
                                           Fraction(1), c * c)
    else:
        c = None
        extra = rng.randint(0, 3)
        codomain = gen_matrix_space(rng, n + extra, denom)
        targets = tuple(rng.sample(range(n + extra), n))
        mapping = homothety.ExplicitMap(targets)
        fit = homothety.fit_homothety(domain, codomain, mapping)
        lam = max(Fraction(1), fit.rho_sq_max / fit.rho_sq_min)
        lo, hi = fit.feasible_r_sq(lam)
        inst = homothety.HomothetyInstance(domain, codomain, mapping,
                                           lam, (lo + hi) / 2)
    assert homothety.verify_homothety(inst).ok
    subset = frozenset(p for p in range(n) if rng.random() < 0.6) or frozenset({0})
    h_subset = homothety.map_subset(inst, subset)
    m = len(codomain)
    members = [set(p for p in range(m) if rng.random() < 0.5)
               for _ in range(rng.randint(2, 4))]
    for p in sorted(h_subset):
        if not any(p in mem for mem in members):
            members[rng.randrange(len(members))].add(p)
    family = CoveringFamily.over_finite(
        codomain, [(f"W{i + 1}", mem) for i, mem in enumerate(members) if mem])
    return HomothetyBundle(inst, subset, family, dilation, c)


# ============================================================
# Brute-force oracles
# ============================================================


def lebesgue_diam_bruteforce(family: CoveringFamily) -> tuple[Value, Optional[frozenset]]:
    """Minimum diameter over all subsets contained in no member, by full enumeration.

    Incremental diameters over bitmask subsets give O(2^n * n); guarded to at
    most 20 points.
    """
    space = family.ambient
    n = len(space)
    if n > 20:
        raise ValueError(f"brute force is limited to 20 points, got {n}")
    member_masks = []
    for m in family.members:
        mask = 0
        for p in m:
            mask |= 1 << p
        member_masks.append(mask)
    full = (1 << n) - 1
    if full in member_masks:
        return INF, None
    rad = space.rad
    diam = [Fraction(0)] * (1 << n)
    best: Optional[Fraction] = None
    best_mask = 0
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        if rest:
            d = diam[rest]
            q = rest
            while q:
                other = (q & -q).bit_length() - 1
                r = rad[low][other]
                if r > d:
                    d = r
                q &= q - 1
            diam[mask] = d
        if best is not None and diam[mask] >= best:
            continue
        if any(mask & ~mm == 0 for mm in member_masks):
            continue
        best = diam[mask]
        best_mask = mask
    if best is None:
        return INF, None
    return Value.sqrt(best), frozenset(p for p in range(n) if best_mask & (1 << p))


def box_lebesgue_sampled(slc: SliceSpace, family: CoveringFamily, a: ClosedBox,
                         step: Fraction) -> tuple[Value, Value]:
    """A [lower, upper] bracket for the exact box value from grid sampling.

    The objective is 1-Lipschitz per coordinate in the sup norm, and every
    point of the box is within step/2 of the grid, so the grid minimum bounds
    the true infimum from above and minus step/2 from below.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    geoms = [boxlab.member_geometry(slc, b) for b in family.members]
    if any(g.fills_slice for g in geoms):
        return INF, INF
    free = slc.free_indices
    if not free:
        pt = [ax.at for ax in slc.axes]
        v = max((boxlab.slice_dist_to_complement(slc, pt, b) for b in family.members),
                default=ZERO)
        return v, v
    axes_grids: list[list[Fraction]] = []
    for i in free:
        lo, hi = a.intervals[i]
        xs = []
        t = lo
        while t < hi:
            xs.append(t)
            t += step
        xs.append(hi)
        axes_grids.append(xs)
    live = [g for g in geoms if not g.dead]
    margin_tables = []
    for g in live:
        per_coord = []
        for k, xs in enumerate(axes_grids):
            per_coord.append([g.profiles[k].value_at(x) for x in xs])
        margin_tables.append(per_coord)
    best: Optional[Fraction] = None
    for idx in itertools.product(*(range(len(xs)) for xs in axes_grids)):
        point_best: Optional[Fraction] = None
        for table in margin_tables:
            m: Optional[Fraction] = None
            infinite = True
            for k, i in enumerate(idx):
                v = table[k][i]
                if v is None:
                    continue
                infinite = False
                if m is None or v < m:
                    m = v
            contrib = None if infinite else m
            if contrib is None:
                point_best = None  # infinite contribution dominates
                break
            if point_best is None or contrib > point_best:
                point_best = contrib
        if point_best is None:
            continue  # objective infinite at this grid point
        if best is None or point_best < best:
            best = point_best
    if best is None:
        return INF, INF
    lower = max(best - step / 2, Fraction(0))
    return Value.of(lower), Value.of(best)


# ============================================================
# Invariants
# ============================================================


@dataclass(frozen=True)
class Violation:
    invariant: str
    level: str  # "assert" | "search"
    seed: int
    trial: int
    detail: str
    instance: dict = field(default_factory=dict)


Check = Callable[[object, random.Random, FuzzConfig], Optional[str]]


def _rational_below(v: Value, rng: random.Random) -> Optional[Fraction]:
    """Some rational r with 0 <= r < v (None when v = 0)."""
    if v.is_infinite:
        return Fraction(rng.randint(1, 100))
    if v.radicand == 0:
        return None
    from math import isqrt

    scaled = v.radicand * 10 ** 12
    r = Fraction(isqrt(scaled.numerator // scaled.denominator), 10 ** 6)
    if r * r >= v.radicand:
        r *= Fraction(999, 1000)
    if r * r >= v.radicand or r < 0:
        return None
    return r


def _check_rad_equals_standard(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    fam = bundle.family
    std = lebesgue.lebesgue_relative(fam)
    rad = lebesgue.lebesgue_rad(fam)
    for (x, sv), (_, rv) in zip(std.per_point, rad.per_point):
        if sv != rv:
            return f"point {x}: standard {sv} vs radius {rv}"
    if std.value != rad.value:
        return f"aggregate {std.value} vs {rad.value}"
    return None


def _check_diam_bounds(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    l_val = lebesgue.lebesgue_relative(bundle.family).value
    d_val, _ = lebesgue.lebesgue_diam(bundle.family)
    if not (l_val <= d_val):
        return f"L = {l_val} > L_diam = {d_val}"
    if not (d_val <= l_val.scale(2)):
        return f"L_diam = {d_val} > 2L = {l_val.scale(2)}"
    return None


def _check_diam_oracle(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    if len(bundle.space) > cfg.max_points_subset:
        return None
    fast, _ = lebesgue.lebesgue_diam(bundle.family)
    brute, _ = lebesgue_diam_bruteforce(bundle.family)
    if fast != brute:
        return f"transversal {fast} vs enumeration {brute}"
    return None


def _check_chain(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    report = lebesgue.chain_report(bundle.family, bundle.a, bundle.b)
    if not report.passed:
        vals = ", ".join(str(v) for v in report.values())
        return f"chain broken: {vals}"
    return None


def _check_subcover(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    fam = bundle.family
    space = bundle.space
    keep = [i for i in range(len(fam)) if rng.random() < 0.7]
    if not keep:
        keep = [0]
    sub = CoveringFamily.over_finite(
        space, [(fam.names[i], fam.members[i]) for i in keep])
    if not covers.is_covering_family(sub, space.all_points()).covered:
        return None  # dropped too much; not a subcover
    if not covers.subcover_check(fam, sub):
        return "subcover_check rejected a genuine subcover"
    if not (lebesgue.lebesgue_relative(sub).value <= lebesgue.lebesgue_relative(fam).value):
        return "L(subcover) > L(cover)"
    if not (covers.mesh(sub) <= covers.mesh(fam)):
        return "mesh(subcover) > mesh(cover)"
    return None


def _check_mesh_restrict(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    restricted = covers.restrict(bundle.family, bundle.b)
    if not (covers.mesh(restricted) <= covers.mesh(bundle.family)):
        return "mesh(U|_B) > mesh(U)"
    return None


def _check_second_kind(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    tilde = lebesgue.second_kind_relative(bundle.family).value
    if not (tilde <= covers.mesh(bundle.family)):
        return f"second-kind {tilde} > mesh {covers.mesh(bundle.family)}"
    return None


def _check_scale_equivariance(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    c = bundle.scale
    scaled_space = bundle.space.scaled(c)
    scaled_fam = CoveringFamily.over_finite(scaled_space, list(bundle.family.named()))
    pairs = [
        ("L", lebesgue.lebesgue_relative(bundle.family).value,
         lebesgue.lebesgue_relative(scaled_fam).value),
        ("L_rad", lebesgue.lebesgue_rad(bundle.family).value,
         lebesgue.lebesgue_rad(scaled_fam).value),
        ("L_diam", lebesgue.lebesgue_diam(bundle.family)[0],
         lebesgue.lebesgue_diam(scaled_fam)[0]),
        ("mesh", covers.mesh(bundle.family), covers.mesh(scaled_fam)),
        ("second", lebesgue.second_kind_relative(bundle.family).value,
         lebesgue.second_kind_relative(scaled_fam).value),
    ]
    for name, base, scaled in pairs:
        if base.is_infinite:
            if not scaled.is_infinite:
                return f"{name}: infinite became {scaled} under scaling"
        elif scaled != base.scale(c):
            return f"{name}: {base} scaled by {c} gave {scaled}, expected {base.scale(c)}"
    return None


def _check_refinement_bridge(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    l_val = lebesgue.lebesgue_relative(bundle.family).value
    r = _rational_below(l_val, rng)
    if r is None:
        return None
    ok, witness = lebesgue.ball_refinement_holds(bundle.family, Value.of(r))
    if not ok:
        return f"balls of radius {r} < L = {l_val} do not refine (center {witness[0]})"
    return None


def _search_second_kind_chain(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    fam, a, b = bundle.family, bundle.a, bundle.b
    try:
        t_ambient = lebesgue.second_kind_relative(fam, a).value
        fam_b = covers.restrict(fam, b)
        into_b = {old: new for new, old in enumerate(sorted(b))}
        t_mid = lebesgue.second_kind_relative(fam_b, [into_b[i] for i in a]).value
        fam_a = covers.restrict(fam, a)
        t_intr = lebesgue.second_kind_relative(fam_a).value
    except Exception as exc:  # pragma: no cover - diagnostics only
        return f"second-kind chain evaluation failed: {exc}"
    if not (t_ambient <= t_mid <= t_intr):
        return (f"second-kind chain fails: {t_ambient}, {t_mid}, {t_intr} "
                "(mesh control breaks restriction monotonicity)")
    return None


def _check_box_bracket(bundle: BoxBundle, rng, cfg) -> Optional[str]:
    exact = boxlab.box_lebesgue_relative(bundle.slc, bundle.family, bundle.a).value
    lower, upper = box_lebesgue_sampled(bundle.slc, bundle.family, bundle.a, cfg.box_step)
    if not (lower <= exact <= upper):
        return f"exact {exact} outside bracket [{lower}, {upper}]"
    return None


def _check_box_shrink_antitone(bundle: BoxBundle, rng, cfg) -> Optional[str]:
    geoms = [boxlab.member_geometry(bundle.slc, b) for b in bundle.family.members]
    free = bundle.slc.free_indices
    if not free:
        return None
    a_free = [bundle.a.intervals[i] for i in free]
    r1 = Fraction(rng.randint(0, 8), 8)
    r2 = r1 + Fraction(rng.randint(1, 8), 8)
    for geom in geoms:
        if geom.dead:
            continue
        for prof, (alo, ahi) in zip(geom.profiles, a_free):
            big = prof.superlevel(r1, alo, ahi) if r1 > 0 else (alo, ahi)
            small = prof.superlevel(r2, alo, ahi)
            if small is not None:
                if big is None or not (big[0] <= small[0] and small[1] <= big[1]):
                    return f"superlevel at {r2} not inside superlevel at {r1}"
    return None


def _check_box_ambient_monotone(bundle: BoxBundle, rng, cfg) -> Optional[str]:
    slc, a = bundle.slc, bundle.a
    clipped_axes = []
    for ax, (lo, hi) in zip(slc.axes, a.intervals):
        if not ax.is_free or lo == hi:
            clipped_axes.append(ax if not ax.is_free else Axis.point(lo))
        else:
            clipped_axes.append(Axis.interval(lo, hi))
    clipped = SliceSpace(tuple(clipped_axes), norm=slc.norm)
    fam_clipped = CoveringFamily.over_slice(clipped, list(bundle.family.named()))
    wide = boxlab.box_lebesgue_relative(slc, bundle.family, a).value
    narrow = boxlab.box_lebesgue_relative(clipped, fam_clipped, a).value
    if not (wide <= narrow):
        return f"value {wide} in the wide ambient exceeds {narrow} in the clipped ambient"
    return None


def _check_box_mesh_bound(bundle: BoxBundle, rng, cfg) -> Optional[str]:
    geoms = [boxlab.member_geometry(bundle.slc, b) for b in bundle.family.members]
    if any(g.fills_slice for g in geoms):
        return None
    m = boxlab.box_mesh(bundle.slc, bundle.family)
    # sample a few points of a and compare the pointwise value against the mesh
    for _ in range(4):
        pt = []
        for i, ax in enumerate(bundle.slc.axes):
            lo, hi = bundle.a.intervals[i]
            t = lo if lo == hi else lo + (hi - lo) * Fraction(rng.randint(0, 8), 8)
            pt.append(t)
        pointwise = max(
            (boxlab.slice_dist_to_complement(bundle.slc, pt, b) for b in bundle.family.members),
            default=ZERO)
        if not (pointwise <= m):
            return f"pointwise value {pointwise} at {pt} exceeds mesh {m}"
    return None


def _check_transport_image(bundle: HomothetyBundle, rng, cfg) -> Optional[str]:
    report = homothety.transport_lemma_check(
        bundle.instance, bundle.subset, bundle.family, ambient_mode="image")
    if not report.passed:
        return f"image-mode transport failed: {report.failed_names()}"
    return None


def _check_dilation_tight(bundle: HomothetyBundle, rng, cfg) -> Optional[str]:
    if not bundle.is_dilation:
        return None
    report = homothety.transport_lemma_check(
        bundle.instance, bundle.subset, bundle.family, ambient_mode="image")
    c = bundle.dilation
    if report.mesh_codomain != report.mesh_domain.scale(c):
        return f"mesh not scaled exactly by {c}"
    if report.leb_codomain != report.leb_domain.scale(c):
        return f"Lebesgue value not scaled exactly by {c}"
    return None


def _check_fit_verify_roundtrip(bundle: HomothetyBundle, rng, cfg) -> Optional[str]:
    inst = bundle.instance
    fit = homothety.fit_homothety(inst.domain, inst.codomain, inst.mapping)
    if fit.lambda_sq_min.is_rational_exact:
        lam = max(Fraction(1), fit.lambda_sq_min.as_fraction())
    else:
        lam = max(Fraction(1), fit.rho_sq_max / fit.rho_sq_min)
    interval = fit.feasible_r_sq(lam)
    if interval is None:
        return f"fitted lambda_sq {lam} reported infeasible"
    refit = homothety.HomothetyInstance(
        inst.domain, inst.codomain, inst.mapping, lam, interval[0])
    if not homothety.verify_homothety(refit).ok:
        return "verification fails at the fitted parameters"
    return None


def _check_pullback_roundtrip(bundle: HomothetyBundle, rng, cfg) -> Optional[str]:
    inst = bundle.instance
    fam_u = homothety.pullback(inst, bundle.family)
    targets = inst.mapping.targets
    image = set(targets)
    for name, member in bundle.family.named():
        pre = frozenset(i for i, t in enumerate(targets) if t in member)
        if not pre:
            continue
        forward = frozenset(targets[i] for i in pre)
        if forward != frozenset(member) & image:
            return f"pullback of {name!r} does not round-trip on the image"
    if not covers.is_covering_family(fam_u, bundle.subset).covered:
        return "pullback family does not cover the subset"
    return None


def _check_generator_validity(bundle: FiniteBundle, rng, cfg) -> Optional[str]:
    if len(bundle.space) > cfg.max_points_subset:
        return None
    report = validate_metric(bundle.space)
    if not report.ok:
        v = report.violations[0]
        return f"generated space violates {v.kind}: {v.detail}"
    return None


DEFAULT_REGISTRY: tuple[tuple[str, str, str, Check], ...] = (
    # (name, kind, level, check)
    ("rad-equals-standard", "finite", "assert", _check_rad_equals_standard),
    ("diam-between-L-and-2L", "finite", "assert", _check_diam_bounds),
    ("diam-transversal-equals-bruteforce", "finite", "assert", _check_diam_oracle),
    ("restriction-chain", "finite", "assert", _check_chain),
    ("subcover-monotonicity", "finite", "assert", _check_subcover),
    ("mesh-restriction", "finite", "assert", _check_mesh_restrict),
    ("second-kind-below-mesh", "finite", "assert", _check_second_kind),
    ("scale-equivariance", "finite", "assert", _check_scale_equivariance),
    ("refinement-bridge", "finite", "assert", _check_refinement_bridge),
    ("generator-validity", "finite", "assert", _check_generator_validity),
    ("second-kind-chain", "finite", "search", _search_second_kind_chain),
    ("box-sampling-bracket", "box", "assert", _check_box_bracket),
    ("box-shrink-antitone", "box", "assert", _check_box_shrink_antitone),
    ("box-ambient-monotone", "box", "assert", _check_box_ambient_monotone),
    ("box-mesh-bound", "box", "assert", _check_box_mesh_bound),
    ("transport-image-mode", "homothety", "assert", _check_transport_image),
    ("dilation-equality", "homothety", "assert", _check_dilation_tight),
    ("fit-verify-roundtrip", "homothety", "assert", _check_fit_verify_roundtrip),
    ("pullback-roundtrip", "homothety", "assert", _check_pullback_roundtrip),
)


# ============================================================
# The suite
# ============================================================


@dataclass
class FuzzReport:
    config: FuzzConfig
    violations: list[Violation]
    findings: list[Violation]
    trials_run: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _bundle_json(bundle) -> dict:
    if isinstance(bundle, FiniteBundle):
        return {
            "kind": "finite",
            "space": space_to_json(bundle.space),
            "cover": covers.family_to_json(bundle.family),
            "a": sorted(bundle.a),
            "b": sorted(bundle.b),
            "scale": str(bundle.scale),
        }
    if isinstance(bundle, BoxBundle):
        return {
            "kind": "box",
            "slice": space_to_json(bundle.slc),
            "cover": covers.family_to_json(bundle.family),
            "subset": [[str(lo), str(hi)] for lo, hi in bundle.a.intervals],
        }
    return {
        "kind": "homothety",
        "instance": homothety.instance_to_json(bundle.instance),
        "subset": sorted(bundle.subset),
        "cover": covers.family_to_json(bundle.family),
    }


def _trial_plan(cfg: FuzzConfig) -> list[tuple[str, int]]:
    master = random.Random(cfg.seed)
    return [
        (cfg.kinds[trial % len(cfg.kinds)], master.getrandbits(64))
        for trial in range(cfg.trials)
    ]


def generate_instance(cfg: FuzzConfig, kind: str, trial_seed: int):
    rng = random.Random(trial_seed)
    if kind == "finite":
        return gen_finite_bundle(rng, cfg), rng
    if kind == "box":
        return gen_box_bundle(rng, cfg), rng
    if kind == "homothety":
        return gen_homothety_bundle(rng, cfg), rng
    raise ValueError(f"unknown instance kind {kind!r}")


def instance_for_trial(cfg: FuzzConfig, trial: int):
    """Regenerate the exact instance a given trial of ``fuzz_suite`` would see."""
    plan = _trial_plan(cfg)
    kind, trial_seed = plan[trial]
    bundle, _ = generate_instance(cfg, kind, trial_seed)
    return bundle


def fuzz_suite(cfg: FuzzConfig, registry=None, results_dir: Optional[str] = None
               ) -> FuzzReport:
    """Run every registered invariant over the seeded instance stream.

    Assert-level violations gate the exit code; search-level findings are
    informational (they hunt for counterexamples that are expected to exist).
    Reproducer documents for assert violations are written to ``results_dir``
    (or $COVERLENS_RESULTS_DIR) when set.
    """
    registry = DEFAULT_REGISTRY if registry is None else registry
    violations: list[Violation] = []
    findings: list[Violation] = []
    for trial, (kind, trial_seed) in enumerate(_trial_plan(cfg)):
        bundle, rng = generate_instance(cfg, kind, trial_seed)
        for name, check_kind, level, check in registry:
            if check_kind != kind:
                continue
            detail = check(bundle, rng, cfg)
            if detail is None:
                continue
            v = Violation(name, level, cfg.seed, trial, detail, _bundle_json(bundle))
            (violations if level == "assert" else findings).append(v)
    if violations:
        out_dir = results_dir or os.environ.get("COVERLENS_RESULTS_DIR")
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            for i, v in enumerate(violations):
                path = os.path.join(out_dir, f"violation-{cfg.seed}-{v.trial}-{i}.json")
                with open(path, "w", encoding="utf-8") as handle:
                    json.dump({
                        "invariant": v.invariant,
                        "seed": v.seed,
                        "trial": v.trial,
                        "detail": v.detail,
                        "instance": v.instance,
                    }, handle, indent=2, sort_keys=True)
    return FuzzReport(cfg, violations, findings, cfg.trials)
