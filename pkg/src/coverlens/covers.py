"""Covering families over finite spaces and slices: membership, restriction, mesh, multiplicity."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import boxlab
from .errors import AmbientMismatchError
from .spaces import (
    Axis,
    ClosedBox,
    FiniteMetricSpace,
    OpenBox,
    SliceSpace,
    induced_subspace,
)
from .values import ZERO, Value

log = logging.getLogger(__name__)

Member = Union[frozenset, OpenBox]
Ambient = Union[FiniteMetricSpace, SliceSpace]


@dataclass(frozen=True)
class CoveringFamily:
    """An ordered, named family of subsets of one ambient space.

    Members are point-index sets over finite spaces and open boxes over
    slices.  Members that are empty after intersecting the ambient are kept
    but flagged in ``notes`` at construction; restriction drops them.
    """

    ambient: Ambient
    names: tuple[str, ...]
    members: tuple[Member, ...]
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.names) != len(self.members):
            raise ValueError("each member needs a name")

    @classmethod
    def over_finite(cls, space: FiniteMetricSpace,
                    named_members: Sequence[tuple[str, Iterable[int]]]) -> "CoveringFamily":
        names, members, notes = [], [], []
        for name, pts in named_members:
            member = frozenset(pts)
            if member and (min(member) < 0 or max(member) >= len(space)):
                raise AmbientMismatchError(f"member {name!r} has indices outside the space")
            if not member:
                notes.append(f"member {name!r} is empty")
            names.append(name)
            members.append(member)
        return cls(space, tuple(names), tuple(members), tuple(notes))

    @classmethod
    def over_slice(cls, slc: SliceSpace,
                   named_members: Sequence[tuple[str, OpenBox]]) -> "CoveringFamily":
        names, members, notes = [], [], []
        for name, box in named_members:
            if box.dim != slc.dim:
                raise AmbientMismatchError(f"member {name!r} has dimension {box.dim}, "
                                           f"slice has {slc.dim}")
            if boxlab.member_geometry(slc, box).dead:
                notes.append(f"member {name!r} misses the slice")
            names.append(name)
            members.append(box)
        return cls(slc, tuple(names), tuple(members), tuple(notes))

    @property
    def is_finite_backend(self) -> bool:
        return isinstance(self.ambient, FiniteMetricSpace)

    def __len__(self) -> int:
        return len(self.members)

    def named(self) -> Iterable[tuple[str, Member]]:
        return zip(self.names, self.members)


@dataclass(frozen=True)
class CoverageCheck:
    covered: bool
    witness: Optional[object] = None  # point index (finite) or coordinate tuple (slice)


def is_covering_family(family: CoveringFamily, subset) -> CoverageCheck:
    """Does every point of the subset lie in some member?  Witness on failure.

    Over slices the witness is an uncovered probe point from the box
    arrangement of the members against the subset box.
    """
    if family.is_finite_backend:
        space = family.ambient
        pts = frozenset(subset)
        if pts and (min(pts) < 0 or max(pts) >= len(space)):
            raise AmbientMismatchError("subset has indices outside the ambient")
        for p in sorted(pts):
            if not any(p in m for m in family.members):
                return CoverageCheck(False, p)
        return CoverageCheck(True)
    if not isinstance(subset, ClosedBox):
        raise AmbientMismatchError("slice-backend subsets must be closed boxes")
    witness = boxlab.covering_witness(family.ambient, family.members, subset)
    return CoverageCheck(witness is None, witness)


def restrict(family: CoveringFamily, subset) -> CoveringFamily:
    """The family U|_B = {U ∩ B} over the induced subspace on B.

    Members with empty intersection are dropped with a log note.  Over slices
    the ambient axes are clipped to the subset box; members keep their boxes
    (margins against the clipped axes realize the intersection).
    """
    if family.is_finite_backend:
        b = frozenset(subset)
        sub = induced_subspace(family.ambient, b)
        order = sorted(b)
        reindex = {old: new for new, old in enumerate(order)}
        names, members, notes = [], [], list(family.notes)
        for name, member in family.named():
            inter = member & b
            if not inter:
                log.info("restrict: dropping member %r (empty intersection)", name)
                notes.append(f"restrict dropped {name!r} (empty intersection)")
                continue
            names.append(name)
            members.append(frozenset(reindex[i] for i in inter))
        return CoveringFamily(sub, tuple(names), tuple(members), tuple(notes))
    if not isinstance(subset, ClosedBox):
        raise AmbientMismatchError("slice-backend subsets must be closed boxes")
    slc = family.ambient
    if not boxlab.box_within_slice(slc, subset):
        raise AmbientMismatchError("subset box does not lie within the slice")
    axes = []
    for ax, (lo, hi) in zip(slc.axes, subset.intervals):
        if not ax.is_free or lo == hi:
            axes.append(Axis.point(lo if ax.is_free else ax.at))
        else:
            axes.append(Axis.interval(lo, hi))
    sub = SliceSpace(tuple(axes), norm=slc.norm)
    names, members, notes = [], [], list(family.notes)
    for name, box in family.named():
        if boxlab.member_geometry(sub, box).dead:
            log.info("restrict: dropping member %r (empty intersection)", name)
            notes.append(f"restrict dropped {name!r} (empty intersection)")
            continue
        names.append(name)
        members.append(box)
    return CoveringFamily(sub, tuple(names), tuple(members), tuple(notes))


def member_diam(family: CoveringFamily, index: int) -> Value:
    """Diameter of one member (of its intersection with the ambient, over slices)."""
    if family.is_finite_backend:
        space = family.ambient
        pts = sorted(family.members[index])
        best = Fraction(0)
        for i, p in enumerate(pts):
            for q in pts[i + 1:]:
                best = max(best, space.rad[p][q])
        return Value.sqrt(best)
    return boxlab.box_diam(family.ambient, family.members[index])


def mesh(family: CoveringFamily) -> Value:
    """sup of member diameters."""
    best = ZERO
    for i in range(len(family)):
        best = max(best, member_diam(family, i))
    return best


def mesh_at(family: CoveringFamily, x) -> Value:
    """sup of diameters over members containing x; 0 when no member contains x."""
    if family.is_finite_backend:
        best = ZERO
        for i, member in enumerate(family.members):
            if x in member:
                best = max(best, member_diam(family, i))
        return best
    return boxlab.box_mesh_at(family.ambient, family, x)


def multiplicity(family: CoveringFamily) -> int:
    """max over points of the number of members containing the point (finite backend)."""
    if not family.is_finite_backend:
        raise AmbientMismatchError("multiplicity is supported on finite backends only")
    space = family.ambient
    return max(
        (sum(1 for m in family.members if p in m) for p in range(len(space))),
        default=0,
    )


def subcover_check(family: CoveringFamily, sub: CoveringFamily) -> bool:
    """True iff every member of ``sub`` is a member of ``family`` (extensionally)
    and ``sub`` still covers the ambient."""
    if family.ambient != sub.ambient:
        raise AmbientMismatchError("subcover check needs a shared ambient")
    for member in sub.members:
        if not any(member == other for other in family.members):
            return False
    if family.is_finite_backend:
        return is_covering_family(sub, family.ambient.all_points()).covered
    slc = family.ambient
    whole = _slice_as_box(slc)
    witness = _covering_witness_unbounded(slc, sub.members, whole)
    return witness is None


def _slice_as_box(slc: SliceSpace):
    ivs = []
    for ax in slc.axes:
        if ax.kind == "line":
            ivs.append((None, None))
        elif ax.kind == "interval":
            ivs.append((ax.lo, ax.hi))
        else:
            ivs.append((ax.at, ax.at))
    return ivs


def _covering_witness_unbounded(slc: SliceSpace, boxes, intervals):
    """Coverage of a possibly unbounded target; unbounded tails get sentinel probes."""
    geoms = [boxlab.member_geometry(slc, b) for b in boxes]
    free = slc.free_indices
    if not free:
        return None if any(not g.dead for g in geoms) else boxlab._embed(slc, ())
    parts = [
        [box.intervals[i] for i in free]
        for box, geom in zip(boxes, geoms)
        if not geom.dead
    ]
    bounded = []
    for k, i in enumerate(free):
        lo, hi = intervals[i]
        finite = [e for part in parts for e in part[k] if e is not None]
        if lo is None:
            lo = min(finite, default=Fraction(0)) - 1
        if hi is None:
            hi = max(finite + [lo], default=Fraction(0)) + 1
        bounded.append((lo, hi))
    ok, witness = boxlab.open_box_coverage(bounded, parts)
    return None if ok else boxlab._embed(slc, witness)


# ============================================================
# JSON forms
# ============================================================


def family_to_json(family: CoveringFamily) -> dict:
    members = []
    for name, member in family.named():
        if family.is_finite_backend:
            labels = [family.ambient.labels[i] for i in sorted(member)]
            members.append({"name": name, "set": labels})
        else:
            box = [
                [None if lo is None else str(lo), None if hi is None else str(hi)]
                for lo, hi in member.intervals
            ]
            members.append({"name": name, "box": box})
    return {"members": members}


def family_from_json(doc: dict, ambient: Ambient) -> CoveringFamily:
    named = []
    for entry in doc["members"]:
        name = entry["name"]
        if "set" in entry:
            if not isinstance(ambient, FiniteMetricSpace):
                raise AmbientMismatchError("set members need a finite ambient")
            named.append((name, frozenset(ambient.index_of(s) for s in entry["set"])))
        elif "box" in entry:
            if not isinstance(ambient, SliceSpace):
                raise AmbientMismatchError("box members need a slice ambient")
            named.append((name, OpenBox.make([(lo, hi) for lo, hi in entry["box"]])))
        else:
            raise ValueError(f"member {name!r} needs a 'set' or 'box' field")
    if isinstance(ambient, FiniteMetricSpace):
        return CoveringFamily.over_finite(ambient, named)
    return CoveringFamily.over_slice(ambient, named)
