"""Exact computations for open axis-aligned box families over slice spaces.

The distance from a point of a slice to the complement of an open box splits
per free coordinate into one-dimensional margin functions: piecewise linear,
1-Lipschitz, with slopes in {-1, 0, +1} and breakpoints at box bounds.  The
pointwise objective (max over members of the min of margins) therefore attains
its infimum over a closed box at a radius where the arrangement of r-shrunk
member boxes changes combinatorially, and those radii are differences or
half-differences of input endpoints.  The relative Lebesgue value is computed
exactly by sweeping that finite candidate set.

Distances from a point to a box complement agree across the euclidean, l1 and
sup norms (the nearest exterior point lies along an axis), so margins and the
derived Lebesgue values are norm-independent; only box diameters (mesh) feel
the slice norm.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional, Sequence

from .errors import AmbientMismatchError, NotACoveringFamilyError
from .spaces import Axis, ClosedBox, OpenBox, Point, SliceSpace, box_within_slice
from .values import INF, ZERO, Value

if TYPE_CHECKING:  # pragma: no cover
    from .covers import CoveringFamily


# ============================================================
# One-dimensional margins
# ============================================================


@dataclass(frozen=True)
class MarginProfile:
    """t -> dist(t, axis \\ (lo, hi)) for one free coordinate.

    ``empty`` marks an interval that misses the axis entirely (margin is 0
    everywhere because the complement is the whole axis).  An inactive side
    has no axis points beyond it, so it contributes no constraint; when both
    sides are inactive the axis sits inside the interval and the margin is
    identically infinite.
    """

    empty: bool
    lo: Optional[Fraction]
    hi: Optional[Fraction]
    left_active: bool
    right_active: bool

    @property
    def infinite(self) -> bool:
        return not self.empty and not self.left_active and not self.right_active

    def value_at(self, t: Fraction) -> Optional[Fraction]:
        """Margin at t (t must lie on the axis); None means infinite."""
        if self.empty:
            return Fraction(0)
        if self.lo is not None and t <= self.lo:
            return Fraction(0)
        if self.hi is not None and t >= self.hi:
            return Fraction(0)
        vals = []
        if self.left_active:
            vals.append(t - self.lo)
        if self.right_active:
            vals.append(self.hi - t)
        return min(vals) if vals else None

    def superlevel(self, r: Fraction, lo_clip: Fraction, hi_clip: Fraction
                   ) -> Optional[tuple[Fraction, Fraction]]:
        """Closed interval {t in [lo_clip, hi_clip] : margin(t) >= r} for r > 0."""
        if self.empty:
            return None
        lo, hi = lo_clip, hi_clip
        if self.left_active:
            lo = max(lo, self.lo + r)
        if self.right_active:
            hi = min(hi, self.hi - r)
        return None if lo > hi else (lo, hi)

    def strict_superlevel(self, r: Fraction
                          ) -> Optional[tuple[Optional[Fraction], Optional[Fraction]]]:
        """Open interval {t : margin(t) > r} for r >= 0, as (lo, hi) with None = unbounded."""
        if self.empty:
            return None
        lo = self.lo + r if self.left_active else None
        hi = self.hi - r if self.right_active else None
        if lo is not None and hi is not None and lo >= hi:
            return None
        return (lo, hi)

    def breakpoints(self) -> list[Fraction]:
        pts = []
        if self.left_active:
            pts.append(self.lo)
        if self.right_active:
            pts.append(self.hi)
        return pts


def margin_profile(axis: Axis, lo: Optional[Fraction], hi: Optional[Fraction]) -> MarginProfile:
    if axis.kind == "point":
        raise ValueError("margin profiles are defined on free axes only")
    if axis.kind == "interval":
        if (lo is not None and lo >= axis.hi) or (hi is not None and hi <= axis.lo):
            return MarginProfile(True, lo, hi, False, False)
        left = lo is not None and lo >= axis.lo
        right = hi is not None and hi <= axis.hi
    else:
        left = lo is not None
        right = hi is not None
    return MarginProfile(False, lo, hi, left, right)


@dataclass(frozen=True)
class MemberGeometry:
    """A box member against a slice: dead (empty intersection) or per-free-coordinate margins."""

    dead: bool
    profiles: tuple[MarginProfile, ...]

    @property
    def fills_slice(self) -> bool:
        return not self.dead and all(p.infinite for p in self.profiles)


def member_geometry(slc: SliceSpace, box: OpenBox) -> MemberGeometry:
    if box.dim != slc.dim:
        raise AmbientMismatchError(
            f"box dimension {box.dim} does not match slice dimension {slc.dim}")
    profiles = []
    for ax, (lo, hi) in zip(slc.axes, box.intervals):
        if ax.kind == "point":
            inside = (lo is None or lo < ax.at) and (hi is None or hi > ax.at)
            if not inside:
                return MemberGeometry(True, ())
        else:
            prof = margin_profile(ax, lo, hi)
            if prof.empty:
                return MemberGeometry(True, ())
            profiles.append(prof)
    return MemberGeometry(False, tuple(profiles))


def _embed(slc: SliceSpace, free_pt: Sequence[Fraction]) -> Point:
    out = []
    k = 0
    for ax in slc.axes:
        if ax.is_free:
            out.append(free_pt[k])
            k += 1
        else:
            out.append(ax.at)
    return tuple(out)


# ============================================================
# Coverage of a closed box by boxes (arrangement tests)
# ============================================================


def box_coverage(a: Sequence[tuple[Fraction, Fraction]],
                 parts: Sequence[Sequence[tuple[Fraction, Fraction]]],
                 ) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
    """Is the closed box ``a`` covered by the union of closed boxes ``parts``?

    Decomposes ``a`` by the arrangement of all part endpoints per coordinate
    and tests each elementary cell's midpoint.  Cell endpoints include every
    part endpoint, so a closed part containing a midpoint contains its whole
    cell, and finitely many closed boxes covering all open cells cover their
    closures.  Returns an uncovered midpoint as witness.
    """
    dim = len(a)
    for part in parts:
        if len(part) != dim:
            raise AmbientMismatchError("part dimension does not match the target box")
    mids_per_coord: list[list[Fraction]] = []
    for k, (alo, ahi) in enumerate(a):
        cuts = {alo, ahi}
        for part in parts:
            lo, hi = part[k]
            if alo < lo < ahi:
                cuts.add(lo)
            if alo < hi < ahi:
                cuts.add(hi)
        grid = sorted(cuts)
        mids = [Fraction(x + y, 2) for x, y in zip(grid, grid[1:])]
        mids_per_coord.append(mids if mids else [alo])
    for mid in itertools.product(*mids_per_coord):
        if not any(all(lo <= t <= hi for (lo, hi), t in zip(part, mid)) for part in parts):
            return False, mid
    return True, None


def open_box_coverage(a: Sequence[tuple[Fraction, Fraction]],
                      parts: Sequence[Sequence[tuple[Optional[Fraction], Optional[Fraction]]]],
                      ) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
    """Is the closed box ``a`` covered by the union of *open* boxes ``parts``?

    Open parts can miss arrangement gridpoints (a face of a cell), so this
    test probes the full face lattice: per coordinate every grid value and
    every midpoint between adjacent grid values.  Within one face each open
    part either contains all of it or none of it, which makes the probe exact.
    """
    dim = len(a)
    for part in parts:
        if len(part) != dim:
            raise AmbientMismatchError("part dimension does not match the target box")
    probes_per_coord: list[list[Fraction]] = []
    for k, (alo, ahi) in enumerate(a):
        cuts = {alo, ahi}
        for part in parts:
            for end in part[k]:
                if end is not None and alo <= end <= ahi:
                    cuts.add(end)
        grid = sorted(cuts)
        probes = []
        for x, y in zip(grid, grid[1:]):
            probes.append(x)
            probes.append(Fraction(x + y, 2))
        probes.append(grid[-1])
        probes_per_coord.append(probes)
    for pt in itertools.product(*probes_per_coord):
        ok = False
        for part in parts:
            inside = True
            for (lo, hi), t in zip(part, pt):
                if (lo is not None and t <= lo) or (hi is not None and t >= hi):
                    inside = False
                    break
            if inside:
                ok = True
                break
        if not ok:
            return False, pt
    return True, None


def covering_witness(slc: SliceSpace, boxes: Sequence[OpenBox], a: ClosedBox
                     ) -> Optional[Point]:
    """An uncovered point of ``a`` under the open boxes, or None if covered."""
    if not box_within_slice(slc, a):
        raise AmbientMismatchError("subset box does not lie within the slice")
    geoms = [member_geometry(slc, b) for b in boxes]
    free = slc.free_indices
    if not free:
        point = _embed(slc, ())
        covered = any(not g.dead for g in geoms)
        return None if covered else point
    a_free = [a.intervals[i] for i in free]
    parts = []
    for box, geom in zip(boxes, geoms):
        if geom.dead:
            continue
        parts.append([box.intervals[i] for i in free])
    ok, witness = open_box_coverage(a_free, parts)
    return None if ok else _embed(slc, witness)


# ============================================================
# Distance to complement, diameters, mesh
# ============================================================


def slice_dist_to_complement(slc: SliceSpace, x: Sequence, box: OpenBox) -> Value:
    """dist(x, slice \\ box): the min of free-coordinate margins at x.

    Infinite margins drop out of the min; if every free coordinate has an
    infinite margin (and fixed coordinates sit inside the box) the slice is
    contained in the box and the distance is infinite.  A box that misses the
    slice leaves the complement equal to the whole slice, so the distance is 0.
    """
    pt = slc.require_point(x)
    geom = member_geometry(slc, box)
    if geom.dead:
        return ZERO
    margins = []
    for prof, i in zip(geom.profiles, slc.free_indices):
        m = prof.value_at(pt[i])
        if m is not None:
            margins.append(m)
    if not margins:
        return INF
    return Value.of(min(margins))


def box_diam(slc: SliceSpace, box: OpenBox) -> Value:
    """Diameter of box ∩ slice under the slice norm (equals that of its closure)."""
    geom = member_geometry(slc, box)
    if geom.dead:
        return ZERO
    sides: list[Fraction] = []
    for ax, (lo, hi) in zip(slc.axes, box.intervals):
        if not ax.is_free:
            continue
        eff_lo = lo if ax.kind == "line" else (ax.lo if lo is None else max(lo, ax.lo))
        eff_hi = hi if ax.kind == "line" else (ax.hi if hi is None else min(hi, ax.hi))
        if eff_lo is None or eff_hi is None:
            return INF
        sides.append(eff_hi - eff_lo)
    if not sides:
        return ZERO
    if slc.norm == "euclidean":
        return Value.sqrt(sum((s * s for s in sides), Fraction(0)))
    if slc.norm == "linf":
        return Value.of(max(sides))
    return Value.of(sum(sides, Fraction(0)))


def box_mesh(slc: SliceSpace, family: "CoveringFamily") -> Value:
    """Supremum of member diameters within the slice."""
    best = ZERO
    for box in family.members:
        best = max(best, box_diam(slc, box))
    return best


def box_mesh_at(slc: SliceSpace, family: "CoveringFamily", x: Sequence) -> Value:
    """Supremum of diameters over the members containing x (0 when there are none)."""
    pt = slc.require_point(x)
    best = ZERO
    for box in family.members:
        if box.contains(pt):
            best = max(best, box_diam(slc, box))
    return best


# ============================================================
# The exact shrink-and-cover sweep
# ============================================================


@dataclass(frozen=True)
class BoxLebesgueResult:
    value: Value
    argmin: Optional[Point]  # an uncovered midpoint just above the optimum
    subset: ClosedBox

    @property
    def certificate(self) -> Optional[Point]:
        return self.argmin


def _shrunk_parts(geoms: Sequence[MemberGeometry],
                  a_free: Sequence[tuple[Fraction, Fraction]],
                  r: Fraction) -> list[list[tuple[Fraction, Fraction]]]:
    parts = []
    for geom in geoms:
        if geom.dead:
            continue
        shrunk = []
        for prof, (alo, ahi) in zip(geom.profiles, a_free):
            iv = prof.superlevel(r, alo, ahi)
            if iv is None:
                shrunk = None
                break
            shrunk.append(iv)
        if shrunk is not None:
            parts.append(shrunk)
    return parts


def box_lebesgue_relative(slc: SliceSpace, family: "CoveringFamily", a: ClosedBox
                          ) -> BoxLebesgueResult:
    """inf over a of (max over members of dist to the member's complement), exactly.

    The objective exceeds r on all of ``a`` iff the r-shrunk member boxes cover
    ``a``; the optimum is the largest radius with coverage and is attained at a
    difference or half-difference of input endpoints.  Candidates are swept by
    binary search (coverage is antitone in r).  Raises
    :class:`NotACoveringFamilyError` when the family does not cover ``a``.
    """
    if not box_within_slice(slc, a):
        raise AmbientMismatchError("subset box does not lie within the slice")
    witness = covering_witness(slc, family.members, a)
    if witness is not None:
        raise NotACoveringFamilyError(witness)
    free = slc.free_indices
    geoms = [member_geometry(slc, b) for b in family.members]
    if any(g.fills_slice for g in geoms):
        return BoxLebesgueResult(INF, None, a)
    a_free = [a.intervals[i] for i in free]

    ends_per_coord: list[set[Fraction]] = []
    for k, i in enumerate(free):
        ends = {a_free[k][0], a_free[k][1]}
        ax = slc.axes[i]
        if ax.kind == "interval":
            ends.update((ax.lo, ax.hi))
        for geom in geoms:
            if not geom.dead:
                ends.update(geom.profiles[k].breakpoints())
        ends_per_coord.append(ends)
    candidates = {Fraction(0)}
    for ends in ends_per_coord:
        pts = sorted(ends)
        for x, y in itertools.combinations(pts, 2):
            d = y - x
            candidates.add(d)
            candidates.add(d / 2)
    ordered = sorted(candidates)

    def covers(r: Fraction) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
        if r == 0:
            return True, None
        return box_coverage(a_free, _shrunk_parts(geoms, a_free, r))

    lo, hi = 0, len(ordered) - 1
    if covers(ordered[hi])[0]:
        return BoxLebesgueResult(Value.of(ordered[hi]), None, a)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if covers(ordered[mid])[0]:
            lo = mid
        else:
            hi = mid
    _, fail_witness = covers(ordered[hi])
    certificate = None if fail_witness is None else _embed(slc, fail_witness)
    return BoxLebesgueResult(Value.of(ordered[lo]), certificate, a)


def box_ball_refinement(slc: SliceSpace, family: "CoveringFamily", a: ClosedBox,
                        r: Fraction) -> tuple[bool, Optional[Point]]:
    """Does every closed ball of radius r centered in ``a`` fit inside some member?

    A closed ball (in any of the three norms) fits inside an open box iff every
    free-coordinate margin strictly exceeds r, so the check is coverage of
    ``a`` by the open strict-superlevel boxes.  With finitely many open
    members this fails at exactly r = L(family, a): the infimum over the
    closed box is attained, and a closed ball needs strict slack — the same
    boundary behaviour the non-attained supremum produces for open balls over
    an infinite family.
    """
    if r < 0:
        raise ValueError("ball radius must be nonnegative")
    if not box_within_slice(slc, a):
        raise AmbientMismatchError("subset box does not lie within the slice")
    free = slc.free_indices
    geoms = [member_geometry(slc, b) for b in family.members]
    if not free:
        covered = any(not g.dead for g in geoms)
        return (True, None) if covered else (False, _embed(slc, ()))
    a_free = [a.intervals[i] for i in free]
    parts = []
    for geom in geoms:
        if geom.dead:
            continue
        part = []
        for prof in geom.profiles:
            iv = prof.strict_superlevel(r)
            if iv is None:
                part = None
                break
            part.append(iv)
        if part is not None:
            parts.append(part)
    ok, witness = open_box_coverage(a_free, parts)
    return (True, None) if ok else (False, _embed(slc, witness))


# ============================================================
# Truncations of the classical infinite families
# ============================================================


@dataclass(frozen=True)
class TruncatedScenario:
    slice: SliceSpace
    names: tuple[str, ...]
    boxes: tuple[OpenBox, ...]
    default_subset: ClosedBox


def build_truncated_scenario(scenario: str, n_max: int) -> TruncatedScenario:
    """Finite truncations of the two classical infinite families.

    ``interval-tail``: members (1/n, +oo) over the unit-interval axis for
    n = 2..n_max; the pointwise value at x is x - 1/n_max, so over a closed
    subset [c, d] of (0, 1) the value is c - 1/n_max and grows with n_max
    while the full family's infimum over the open interval is 0.

    ``ball-tail``: open sup-norm balls of radius 1 - 1/n_max around the grid
    (i/n_max, j/n_max) covering [0,1]^2.  Nested smaller balls at the same
    centers change no computed quantity, so the truncation keeps only the
    largest radius per center.  Over [1/4, 3/4]^2 the value is
    1 - 3/(2 n_max), increasing toward 1.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if scenario == "interval-tail":
        slc = SliceSpace((Axis.interval(0, 1),))
        names = tuple(f"U{n}" for n in range(2, n_max + 1))
        boxes = tuple(OpenBox.make([(Fraction(1, n), None)]) for n in range(2, n_max + 1))
        subset = ClosedBox.make([(Fraction(1, 2), Fraction(3, 4))])
        return TruncatedScenario(slc, names, boxes, subset)
    if scenario == "ball-tail":
        slc = SliceSpace((Axis.line(), Axis.line()), norm="linf")
        rho = 1 - Fraction(1, n_max)
        names = []
        boxes = []
        for i in range(n_max + 1):
            for j in range(n_max + 1):
                cx, cy = Fraction(i, n_max), Fraction(j, n_max)
                names.append(f"B({cx},{cy})")
                boxes.append(OpenBox.make([(cx - rho, cx + rho), (cy - rho, cy + rho)]))
        subset = ClosedBox.make([(Fraction(1, 4), Fraction(3, 4))] * 2)
        return TruncatedScenario(slc, tuple(names), tuple(boxes), subset)
    raise ValueError(f"unknown scenario {scenario!r}")


def truncated_family_lebesgue(n_max: int, scenario: str,
                              subset: Optional[ClosedBox] = None) -> Value:
    """Exact relative Lebesgue value of a truncated scenario over a closed subset."""
    fixture = build_truncated_scenario(scenario, n_max)
    from .covers import CoveringFamily  # local import: covers builds on boxlab

    family = CoveringFamily.over_slice(fixture.slice, list(zip(fixture.names, fixture.boxes)))
    a = subset if subset is not None else fixture.default_subset
    return box_lebesgue_relative(fixture.slice, family, a).value
