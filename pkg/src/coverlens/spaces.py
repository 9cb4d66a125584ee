"""Metric spaces: finite (matrix or rational point cloud) and continuous axis-aligned slices.

A finite space stores labels plus the full table of squared distances as exact
rationals, whatever the backend.  A ``SliceSpace`` is an affine axis-aligned
subset of Q^n: per coordinate a full line, a closed interval, or a fixed
point.  Subsets of slices are closed rational boxes; cover members over slices
are open rational boxes (see :mod:`coverlens.covers`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import AmbientMismatchError
from .values import Value, RationalLike, as_fraction, exact_sqrt

NORMS = ("euclidean", "linf", "l1")

Point = tuple[Fraction, ...]


# ============================================================
# Finite spaces
# ============================================================


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labeled points with an exact squared-distance table.

    ``rad[i][j]`` is d(i,j)^2 as a Fraction; the distance itself is
    ``Value.sqrt(rad[i][j])``.  Cloud backends keep their coordinates so that
    restrictions stay exact.
    """

    labels: tuple[str, ...]
    rad: tuple[tuple[Fraction, ...], ...]
    backend: str = "matrix"  # "matrix" | "cloud"
    points: Optional[tuple[Point, ...]] = None
    norm: Optional[str] = None

    @classmethod
    def from_matrix(
        cls, distances: Sequence[Sequence[Union[Value, RationalLike]]],
        labels: Optional[Sequence[str]] = None,
    ) -> "FiniteMetricSpace":
        n = len(distances)
        if labels is None:
            labels = [f"p{i}" for i in range(n)]
        if len(labels) != n or any(len(row) != n for row in distances):
            raise ValueError("distance table must be square and match labels")
        rad = tuple(
            tuple(
                (d.radicand if isinstance(d, Value) else Value.of(d).radicand)
                for d in row
            )
            for row in distances
        )
        for row in rad:
            if any(r is None for r in row):
                raise ValueError("distances must be finite")
        return cls(labels=tuple(labels), rad=rad, backend="matrix")

    @classmethod
    def from_cloud(
        cls, points: Sequence[Sequence[RationalLike]], norm: str = "euclidean",
        labels: Optional[Sequence[str]] = None,
    ) -> "FiniteMetricSpace":
        if norm not in NORMS:
            raise ValueError(f"unknown norm {norm!r}")
        pts = tuple(tuple(as_fraction(c) for c in p) for p in points)
        if pts and any(len(p) != len(pts[0]) for p in pts):
            raise ValueError("cloud points must share a dimension")
        if labels is None:
            labels = [f"p{i}" for i in range(len(pts))]
        rad = tuple(
            tuple(_cloud_rad(p, q, norm) for q in pts) for p in pts
        )
        return cls(labels=tuple(labels), rad=rad, backend="cloud", points=pts, norm=norm)

    def __len__(self) -> int:
        return len(self.labels)

    def distance(self, p: int, q: int) -> Value:
        if not (0 <= p < len(self) and 0 <= q < len(self)):
            raise AmbientMismatchError(f"unknown point index {p if p >= len(self) or p < 0 else q}")
        return Value.sqrt(self.rad[p][q])

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AmbientMismatchError(f"unknown point label {label!r}") from None

    def all_points(self) -> frozenset[int]:
        return frozenset(range(len(self)))

    @property
    def all_rational_exact(self) -> bool:
        return all(exact_sqrt(r) is not None for row in self.rad for r in row)

    def scaled(self, c: RationalLike) -> "FiniteMetricSpace":
        """The same point set with every distance multiplied by rational c > 0."""
        f = as_fraction(c)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        rad = tuple(tuple(r * f * f for r in row) for row in self.rad)
        if self.backend == "cloud":
            pts = tuple(tuple(x * f for x in p) for p in self.points)
            return FiniteMetricSpace(self.labels, rad, "cloud", pts, self.norm)
        return FiniteMetricSpace(self.labels, rad, "matrix")


def _cloud_rad(p: Point, q: Point, norm: str) -> Fraction:
    deltas = [abs(a - b) for a, b in zip(p, q)]
    if norm == "euclidean":
        return sum((d * d for d in deltas), Fraction(0))
    if norm == "linf":
        m = max(deltas, default=Fraction(0))
        return m * m
    s = sum(deltas, Fraction(0))
    return s * s


def induced_subspace(space: FiniteMetricSpace, subset: Iterable[int]) -> FiniteMetricSpace:
    """The subspace on ``subset`` with the restricted metric; labels preserved."""
    idx = sorted(set(subset))
    if not idx:
        raise ValueError("cannot induce a subspace on an empty subset")
    if idx[0] < 0 or idx[-1] >= len(space):
        raise AmbientMismatchError(f"subset indices out of range: {idx}")
    labels = tuple(space.labels[i] for i in idx)
    rad = tuple(tuple(space.rad[i][j] for j in idx) for i in idx)
    if space.backend == "cloud":
        pts = tuple(space.points[i] for i in idx)
        return FiniteMetricSpace(labels, rad, "cloud", pts, space.norm)
    return FiniteMetricSpace(labels, rad, "matrix")


# ---- metric validation ----


@dataclass(frozen=True)
class MetricViolation:
    kind: str  # "diagonal" | "symmetry" | "positivity" | "triangle"
    witness: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class MetricReport:
    violations: tuple[MetricViolation, ...]
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_metric(space: FiniteMetricSpace) -> MetricReport:
    """List every violated metric axiom with a witness.

    The triangle inequality needs addition, so it is checked only when every
    distance is rational-exact; otherwise the report carries a note instead of
    an inexact verdict.  Cloud backends satisfy all axioms by construction but
    are validated the same way.
    """
    n = len(space)
    violations: list[MetricViolation] = []
    lab = space.labels
    for i in range(n):
        if space.rad[i][i] != 0:
            violations.append(MetricViolation(
                "diagonal", (lab[i],), f"d({lab[i]},{lab[i]}) = {Value.sqrt(space.rad[i][i])} != 0"))
    for i in range(n):
        for j in range(i + 1, n):
            if space.rad[i][j] != space.rad[j][i]:
                violations.append(MetricViolation(
                    "symmetry", (lab[i], lab[j]),
                    f"d({lab[i]},{lab[j]}) = {Value.sqrt(space.rad[i][j])} but "
                    f"d({lab[j]},{lab[i]}) = {Value.sqrt(space.rad[j][i])}"))
            if space.rad[i][j] == 0:
                violations.append(MetricViolation(
                    "positivity", (lab[i], lab[j]), f"d({lab[i]},{lab[j]}) = 0 for distinct points"))
    notes: tuple[str, ...] = ()
    if space.all_rational_exact:
        d = [[exact_sqrt(space.rad[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if d[i][j] > d[i][k] + d[k][j]:
                        violations.append(MetricViolation(
                            "triangle", (lab[i], lab[k], lab[j]),
                            f"d({lab[i]},{lab[j]}) = {d[i][j]} > {d[i][k]} + {d[k][j]}"))
    else:
        notes = ("triangle check skipped (irrational entries)",)
    return MetricReport(tuple(violations), notes)


# ============================================================
# Slice spaces and boxes
# ============================================================


@dataclass(frozen=True)
class Axis:
    """One coordinate of a slice: a full line, a closed interval, or a fixed point."""

    kind: str  # "line" | "interval" | "point"
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    at: Optional[Fraction] = None

    @classmethod
    def line(cls) -> "Axis":
        return cls("line")

    @classmethod
    def interval(cls, lo: RationalLike, hi: RationalLike) -> "Axis":
        a, b = as_fraction(lo), as_fraction(hi)
        if not a < b:
            raise ValueError(f"interval axis needs lo < hi, got [{a}, {b}]")
        return cls("interval", lo=a, hi=b)

    @classmethod
    def point(cls, at: RationalLike) -> "Axis":
        return cls("point", at=as_fraction(at))

    @property
    def is_free(self) -> bool:
        return self.kind != "point"

    def contains(self, t: Fraction) -> bool:
        if self.kind == "line":
            return True
        if self.kind == "interval":
            return self.lo <= t <= self.hi
        return t == self.at


@dataclass(frozen=True)
class SliceSpace:
    """An axis-aligned affine slice of Q^n with a chosen norm."""

    axes: tuple[Axis, ...]
    norm: str = "euclidean"

    def __post_init__(self):
        if self.norm not in NORMS:
            raise ValueError(f"unknown norm {self.norm!r}")

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def free_indices(self) -> tuple[int, ...]:
        return tuple(i for i, ax in enumerate(self.axes) if ax.is_free)

    def contains(self, p: Sequence[RationalLike]) -> bool:
        if len(p) != self.dim:
            return False
        return all(ax.contains(as_fraction(t)) for ax, t in zip(self.axes, p))

    def require_point(self, p: Sequence[RationalLike]) -> Point:
        pt = tuple(as_fraction(t) for t in p)
        if not self.contains(pt):
            raise AmbientMismatchError(f"point {tuple(map(str, pt))} lies outside the slice")
        return pt

    def distance(self, p: Sequence[RationalLike], q: Sequence[RationalLike]) -> Value:
        a, b = self.require_point(p), self.require_point(q)
        return Value.sqrt(_cloud_rad(a, b, self.norm))


@dataclass(frozen=True)
class ClosedBox:
    """A closed rational box; the subset type over slices.

    On a slice, fixed coordinates must appear as the degenerate interval
    [c, c].  Degenerate boxes (single points) are allowed.
    """

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def make(cls, intervals: Sequence[tuple[RationalLike, RationalLike]]) -> "ClosedBox":
        ivs = []
        for lo, hi in intervals:
            a, b = as_fraction(lo), as_fraction(hi)
            if a > b:
                raise ValueError(f"closed interval needs lo <= hi, got [{a}, {b}]")
            ivs.append((a, b))
        return cls(tuple(ivs))

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def contains(self, p: Sequence[Fraction]) -> bool:
        return len(p) == self.dim and all(lo <= t <= hi for (lo, hi), t in zip(self.intervals, p))


@dataclass(frozen=True)
class OpenBox:
    """An open axis-aligned box; the cover-member type over slices.

    Interval ends may be None, meaning unbounded on that side.
    """

    intervals: tuple[tuple[Optional[Fraction], Optional[Fraction]], ...]

    @classmethod
    def make(
        cls, intervals: Sequence[tuple[Optional[RationalLike], Optional[RationalLike]]]
    ) -> "OpenBox":
        ivs = []
        for lo, hi in intervals:
            a = None if lo is None else as_fraction(lo)
            b = None if hi is None else as_fraction(hi)
            if a is not None and b is not None and a >= b:
                raise ValueError(f"open interval needs lo < hi, got ({a}, {b})")
            ivs.append((a, b))
        return cls(tuple(ivs))

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def contains(self, p: Sequence[Fraction]) -> bool:
        if len(p) != self.dim:
            return False
        for (lo, hi), t in zip(self.intervals, p):
            if lo is not None and t <= lo:
                return False
            if hi is not None and t >= hi:
                return False
        return True


def box_within_slice(slc: SliceSpace, box: ClosedBox) -> bool:
    """True iff the closed box is a subset of the slice (fixed axes pinned)."""
    if box.dim != slc.dim:
        return False
    for ax, (lo, hi) in zip(slc.axes, box.intervals):
        if ax.kind == "point":
            if not (lo == hi == ax.at):
                return False
        elif ax.kind == "interval":
            if lo < ax.lo or hi > ax.hi:
                return False
    return True


# ============================================================
# JSON forms
# ============================================================


def _frac_to_json(x: Optional[Fraction]):
    return None if x is None else str(x)


def space_to_json(space) -> dict:
    if isinstance(space, FiniteMetricSpace):
        if space.backend == "cloud":
            return {
                "type": "cloud",
                "labels": list(space.labels),
                "norm": space.norm,
                "points": [[str(c) for c in p] for p in space.points],
            }
        return {
            "type": "matrix",
            "labels": list(space.labels),
            "distances": [
                [Value.sqrt(r).serialize() for r in row] for row in space.rad
            ],
        }
    if isinstance(space, SliceSpace):
        axes = []
        for ax in space.axes:
            if ax.kind == "line":
                axes.append({"kind": "line"})
            elif ax.kind == "interval":
                axes.append({"kind": "interval", "lo": str(ax.lo), "hi": str(ax.hi)})
            else:
                axes.append({"kind": "point", "at": str(ax.at)})
        return {"type": "slice", "norm": space.norm, "axes": axes}
    raise TypeError(f"not a space: {space!r}")


def space_from_json(doc: dict):
    kind = doc.get("type")
    if kind == "matrix":
        rows = [[Value.parse(v) for v in row] for row in doc["distances"]]
        return FiniteMetricSpace.from_matrix(rows, labels=doc.get("labels"))
    if kind == "cloud":
        return FiniteMetricSpace.from_cloud(
            doc["points"], norm=doc.get("norm", "euclidean"), labels=doc.get("labels"))
    if kind == "slice":
        axes = []
        for ax in doc["axes"]:
            if ax["kind"] == "line":
                axes.append(Axis.line())
            elif ax["kind"] == "interval":
                axes.append(Axis.interval(ax["lo"], ax["hi"]))
            elif ax["kind"] == "point":
                axes.append(Axis.point(ax["at"]))
            else:
                raise ValueError(f"unknown axis kind {ax['kind']!r}")
        return SliceSpace(tuple(axes), norm=doc.get("norm", "euclidean"))
    raise ValueError(f"unknown space type {kind!r}")


def subset_to_json(subset, space=None) -> dict:
    if isinstance(subset, ClosedBox):
        return {"box": [[str(lo), str(hi)] for lo, hi in subset.intervals]}
    labels = sorted(subset)
    if space is not None:
        labels = [space.labels[i] for i in sorted(subset)]
    return {"set": labels}


def subset_from_json(doc: dict, space=None):
    if "box" in doc:
        return ClosedBox.make([(lo, hi) for lo, hi in doc["box"]])
    if "set" in doc:
        items = doc["set"]
        if space is not None and items and isinstance(items[0], str):
            return frozenset(space.index_of(s) for s in items)
        return frozenset(int(i) for i in items)
    raise ValueError("subset document needs a 'set' or 'box' field")
