"""Lebesgue-number variants on finite metric spaces, with the chain and refinement checks.

Everything here is an exact min/max computation over squared distances.  On a
finite space every subset is open, all infima and suprema are attained, and the
three classical definitions relate by: the radius variant equals the standard
one pointwise, and the diameter variant is the least diameter of a set
contained in no member.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .covers import CoveringFamily, is_covering_family, mesh_at, restrict
from .errors import AmbientMismatchError, NotACoveringFamilyError
from .spaces import FiniteMetricSpace
from .values import INF, ZERO, Value


def _require_finite(family: CoveringFamily) -> FiniteMetricSpace:
    if not family.is_finite_backend:
        raise AmbientMismatchError("this operation needs a finite-backend family")
    return family.ambient


def _subset_or_all(space: FiniteMetricSpace, subset) -> list[int]:
    if subset is None:
        return list(range(len(space)))
    pts = sorted(set(subset))
    if pts and (pts[0] < 0 or pts[-1] >= len(space)):
        raise AmbientMismatchError("subset has indices outside the space")
    if not pts:
        raise ValueError("subset must be nonempty")
    return pts


def dist_to_complement(space: FiniteMetricSpace, x: int, member: frozenset) -> Value:
    """min over y outside the member of d(x, y); infinite when the member is the whole space."""
    if not (0 <= x < len(space)):
        raise AmbientMismatchError(f"unknown point index {x}")
    best: Optional[Fraction] = None
    for y in range(len(space)):
        if y in member:
            continue
        r = space.rad[x][y]
        if best is None or r < best:
            best = r
    return INF if best is None else Value.sqrt(best)


def _pointwise_standard(space: FiniteMetricSpace, family: CoveringFamily, x: int) -> Value:
    return max(
        (dist_to_complement(space, x, m) for m in family.members),
        default=ZERO,
    )


@dataclass(frozen=True)
class LebesgueReport:
    """One computed variant: the value, where it is attained, and the per-point table."""

    variant: str  # "standard" | "rad" | "second_kind"
    value: Value
    argmin: int
    per_point: tuple[tuple[int, Value], ...]
    subset: tuple[int, ...]
    flags: tuple[str, ...] = ()


def _assemble(variant: str, pts: list[int], vals: list[Value],
              flags: Iterable[str] = ()) -> LebesgueReport:
    value = min(vals)
    argmin = pts[vals.index(value)]
    return LebesgueReport(variant, value, argmin,
                          tuple(zip(pts, vals)), tuple(pts), tuple(flags))


def lebesgue_relative(family: CoveringFamily, subset=None) -> LebesgueReport:
    """inf over the subset of (sup over members of the distance to the member's complement).

    With the whole space as subset this is the Lebesgue number of a cover;
    complements are always taken in the family's ambient.  Raises
    :class:`NotACoveringFamilyError` when some subset point is uncovered.
    """
    space = _require_finite(family)
    pts = _subset_or_all(space, subset)
    check = is_covering_family(family, pts)
    if not check.covered:
        raise NotACoveringFamilyError(space.labels[check.witness])
    vals = [_pointwise_standard(space, family, x) for x in pts]
    return _assemble("standard", pts, vals)


def lebesgue_rad_at(family: CoveringFamily, x: int) -> Value:
    """sup of radii r such that the open ball B(x, r) fits inside some member.

    Computed independently of complement distances: balls around x only change
    at the distinct distances from x, so each prefix of the distance-sorted
    point list is tested for containment in a member and the supremum is the
    next distance after the largest fitting prefix (infinite when the whole
    space fits).  Returns 0 when x lies in no member.
    """
    space = _require_finite(family)
    if not (0 <= x < len(space)):
        raise AmbientMismatchError(f"unknown point index {x}")
    order = sorted(range(len(space)), key=lambda y: space.rad[x][y])
    distinct: list[Fraction] = []
    for y in order:
        r = space.rad[x][y]
        if not distinct or r != distinct[-1]:
            distinct.append(r)
    prefix: set[int] = set()
    pos = 0
    last_fit = -1
    for level, r in enumerate(distinct):
        while pos < len(order) and space.rad[x][order[pos]] == r:
            prefix.add(order[pos])
            pos += 1
        if any(prefix <= m for m in family.members):
            last_fit = level
        else:
            break
    if last_fit < 0:
        return ZERO
    if last_fit == len(distinct) - 1:
        return INF
    return Value.sqrt(distinct[last_fit + 1])


def lebesgue_rad(family: CoveringFamily, subset=None) -> LebesgueReport:
    """The radius variant aggregated over a subset, with flags for uncovered points."""
    space = _require_finite(family)
    pts = _subset_or_all(space, subset)
    vals = [lebesgue_rad_at(family, x) for x in pts]
    flags = [
        f"point {space.labels[x]!r} lies in no member (radius value 0)"
        for x, v in zip(pts, vals)
        if v == ZERO and not any(x in m for m in family.members)
    ]
    return _assemble("rad", pts, vals, flags)


def lebesgue_diam(family: CoveringFamily) -> tuple[Value, Optional[frozenset]]:
    """The least diameter of a "bad" set (one contained in no member), with a witness.

    A bad set is exactly a transversal of the member complements, so the
    minimum is found by picking one point per distinct complement under
    branch-and-bound on the running diameter; infinite when some member is the
    whole space (no bad sets exist).  Cross-checked against full subset
    enumeration in :mod:`coverlens.oracles`.
    """
    space = _require_finite(family)
    everything = space.all_points()
    complements = []
    seen = set()
    for m in family.members:
        c = everything - m
        if not c:
            return INF, None
        if c not in seen:
            seen.add(c)
            complements.append(sorted(c))
    complements.sort(key=len)
    rad = space.rad

    best_rad: Optional[Fraction] = None
    best_set: Optional[frozenset] = None

    def extend(chosen: list[int], cur: Fraction):
        nonlocal best_rad, best_set
        if best_rad is not None and cur >= best_rad:
            return
        target = None
        for comp in complements:
            if not any(p in chosen for p in comp):
                target = comp
                break
        if target is None:
            best_rad, best_set = cur, frozenset(chosen)
            return
        for p in target:
            new = cur
            for q in chosen:
                new = max(new, rad[p][q])
            chosen.append(p)
            extend(chosen, new)
            chosen.pop()

    extend([], Fraction(0))
    return Value.sqrt(best_rad), best_set


def ball_refinement_holds(family: CoveringFamily, r: Value
                          ) -> tuple[bool, Optional[tuple[int, frozenset]]]:
    """Is every open ball B(x, r) = {y : d(x, y) < r} contained in some member?

    On failure returns the center together with the blocking ball.  The empty
    ball (r = 0) is contained in any member.
    """
    space = _require_finite(family)
    for x in range(len(space)):
        if r.is_infinite:
            ball = space.all_points()
        else:
            ball = frozenset(
                y for y in range(len(space)) if space.rad[x][y] < r.radicand)
        if not any(ball <= m for m in family.members):
            return False, (x, ball)
    return True, None


def second_kind_relative(family: CoveringFamily, subset=None) -> LebesgueReport:
    """Pointwise min of the standard value and the pointwise mesh, then inf over the subset.

    The pointwise mesh of an uncovered point is 0 (sup over no members), which
    caps the result; such points are flagged.
    """
    space = _require_finite(family)
    pts = _subset_or_all(space, subset)
    check = is_covering_family(family, pts)
    if not check.covered:
        raise NotACoveringFamilyError(space.labels[check.witness])
    vals = []
    flags = []
    for x in pts:
        m = mesh_at(family, x)
        if not any(x in member for member in family.members):
            flags.append(f"point {space.labels[x]!r} lies in no member (pointwise mesh 0)")
        vals.append(min(_pointwise_standard(space, family, x), m))
    return _assemble("second_kind", pts, vals, flags)


# ============================================================
# The restriction chain
# ============================================================


@dataclass(frozen=True)
class ChainReport:
    """L(U) <= L_X(U, A) <= L_B(U|_B, A) <= L_A(U|_A, A), each computed exactly.

    ``l_cover`` is present only when the family covers the whole space; for a
    family that merely covers A the three relative terms remain valid.
    """

    l_cover: Optional[Value]
    l_ambient: Value
    l_restricted: Value
    l_intrinsic: Value
    inequalities: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.inequalities)

    def values(self) -> tuple[Optional[Value], Value, Value, Value]:
        return (self.l_cover, self.l_ambient, self.l_restricted, self.l_intrinsic)


def chain_report(family: CoveringFamily, a, b) -> ChainReport:
    """Evaluate the whole restriction chain for subsets a ⊆ b of the ambient."""
    space = _require_finite(family)
    a = frozenset(a)
    b = frozenset(b)
    if not a:
        raise ValueError("subset a must be nonempty")
    if not a <= b:
        raise AmbientMismatchError("chain needs a ⊆ b")
    if b and max(b) >= len(space):
        raise AmbientMismatchError("subset b has indices outside the space")

    covers_all = is_covering_family(family, space.all_points()).covered
    l_cover = lebesgue_relative(family).value if covers_all else None
    l_ambient = lebesgue_relative(family, a).value

    fam_b = restrict(family, b)
    b_order = sorted(b)
    into_b = {old: new for new, old in enumerate(b_order)}
    l_restricted = lebesgue_relative(fam_b, [into_b[i] for i in a]).value

    fam_a = restrict(family, a)
    l_intrinsic = lebesgue_relative(fam_a).value

    ineqs = []
    if l_cover is not None:
        ineqs.append(("L(U) <= L_X(U,A)", l_cover <= l_ambient))
    ineqs.append(("L_X(U,A) <= L_B(U|B,A)", l_ambient <= l_restricted))
    ineqs.append(("L_B(U|B,A) <= L_A(U|A,A)", l_restricted <= l_intrinsic))
    return ChainReport(l_cover, l_ambient, l_restricted, l_intrinsic, tuple(ineqs))


# ============================================================
# JSON form
# ============================================================


def report_to_json(report: LebesgueReport, space: FiniteMetricSpace,
                   per_point: bool = False) -> dict:
    doc = {
        "variant": report.variant,
        "value": report.value.serialize(),
        "argmin": space.labels[report.argmin],
    }
    if report.flags:
        doc["flags"] = list(report.flags)
    if per_point:
        doc["per_point"] = {
            space.labels[x]: v.serialize() for x, v in report.per_point
        }
    return doc
