"""Finite metric spaces: validation, ball queries, and critical radii.

Distance comparisons are exact on the stored floating-point values; no
tolerance is ever applied when deciding ball membership, because the
open/closed distinction would not survive one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import (
    DomainError,
    DuplicatePoints,
    IndexOutOfRange,
    InvalidMetric,
    Violation,
)

# Relative slack under which a triangle violation is demoted to an advisory
# (advisory mode only).  Point clouds evaluated in floating point can land a
# rounding error on the wrong side of an exact comparison.
TRIANGLE_ADVISORY_SLACK = 1e-12

NORMS = ("l1", "l2", "linf")


class BallKind(str, Enum):
    """Metric ball flavour: strict or non-strict inequality on the radius."""

    OPEN = "open"
    CLOSED = "closed"

    def contains(self, distance: float, radius: float) -> bool:
        if self is BallKind.OPEN:
            return distance < radius
        return distance <= radius


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A validated n-point metric space given by its distance matrix."""

    n: int
    dist: tuple[tuple[float, ...], ...]
    labels: tuple[str, ...] | None = None
    advisories: tuple[Violation, ...] = ()

    def distance(self, i: int, j: int) -> float:
        return self.dist[i][j]

    @property
    def diameter(self) -> float:
        return max(max(row) for row in self.dist)

    @property
    def min_distance(self) -> float:
        return min(
            self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)
        )

    def ball(self, center: int, radius: float, kind: BallKind) -> tuple[int, ...]:
        return ball(self, center, radius, kind)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)


@dataclass(frozen=True)
class PointCloud:
    """Points in R^dim with one of the l1 / l2 / linf norms."""

    dim: int
    points: tuple[tuple[float, ...], ...]
    norm: str

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dim}")
        if self.norm not in NORMS:
            raise DomainError(f"norm must be one of {NORMS}, got {self.norm!r}")
        pts = tuple(tuple(float(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        for idx, p in enumerate(pts):
            if len(p) != self.dim:
                raise DomainError(f"point {idx} has {len(p)} coordinates, expected {self.dim}")
        seen: dict[tuple[float, ...], int] = {}
        for idx, p in enumerate(pts):
            if p in seen:
                raise DuplicatePoints(seen[p], idx)
            seen[p] = idx


@dataclass(frozen=True)
class CriticalRadii:
    """Radii at which ball families of a finite space can change.

    ``values`` are the distinct positive pairwise distances; ``midpoints``
    hold one radius strictly between each consecutive pair of values plus one
    below the minimum and one above the maximum.  Every ball B(x, r), for any
    r > 0 and either kind, equals B(x, r') for some enumerated r'.
    """

    values: tuple[float, ...]
    midpoints: tuple[float, ...]

    def all_radii(self) -> tuple[float, ...]:
        return tuple(sorted(self.values + self.midpoints))


def _norm_distance(norm: str, p: Sequence[float], q: Sequence[float]) -> float:
    if norm == "l1":
        total = 0.0
        for a, b in zip(p, q):
            total += abs(a - b)
        return total
    if norm == "linf":
        return max(abs(a - b) for a, b in zip(p, q))
    total = 0.0
    for a, b in zip(p, q):
        d = a - b
        total += d * d
    return math.sqrt(total)


def validate_metric(
    matrix: Sequence[Sequence[float]],
    labels: Sequence[str] | None = None,
    advisory: bool = False,
) -> FiniteMetricSpace:
    """Validate a distance matrix and return the metric space it defines.

    Every violated axiom is collected before raising, so the InvalidMetric
    error lists them all.  With ``advisory=True``, triangle violations within
    TRIANGLE_ADVISORY_SLACK relative excess are recorded on the returned
    space instead of failing.
    """
    n = len(matrix)
    if n < 2:
        raise DomainError(f"a metric space needs at least two points, got {n}")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise DomainError(f"row {i} has length {len(row)}, expected {n}")
        rows.append(tuple(float(x) for x in row))
    dist = tuple(rows)

    violations: list[Violation] = []
    advisories: list[Violation] = []
    for i in range(n):
        for j in range(n):
            if not math.isfinite(dist[i][j]):
                violations.append(
                    Violation("nonfinite", (i, j), f"dist[{i}][{j}] = {dist[i][j]!r}")
                )
    if violations:
        raise InvalidMetric(violations)

    for i in range(n):
        if dist[i][i] != 0.0:
            violations.append(
                Violation("nonzero-diagonal", (i,), f"dist[{i}][{i}] = {dist[i][i]!r}")
            )
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                violations.append(
                    Violation(
                        "asymmetric", (i, j), f"{dist[i][j]!r} != {dist[j][i]!r}"
                    )
                )
            elif dist[i][j] < 0.0:
                violations.append(
                    Violation("negative-distance", (i, j), f"dist = {dist[i][j]!r}")
                )
            elif dist[i][j] == 0.0:
                violations.append(Violation("duplicate-points", (i, j)))
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                bound = dist[i][j] + dist[j][k]
                if dist[i][k] > bound:
                    v = Violation(
                        "triangle",
                        (i, k, j),
                        f"{dist[i][k]!r} > {dist[i][j]!r} + {dist[j][k]!r}",
                    )
                    if advisory and dist[i][k] <= bound * (1.0 + TRIANGLE_ADVISORY_SLACK):
                        advisories.append(v)
                    else:
                        violations.append(v)
                    break  # one witness per (i, k) pair
    if violations:
        raise InvalidMetric(violations)

    label_tuple = tuple(str(x) for x in labels) if labels is not None else None
    if label_tuple is not None and len(label_tuple) != n:
        raise DomainError(f"{len(label_tuple)} labels for {n} points")
    return FiniteMetricSpace(n=n, dist=dist, labels=label_tuple, advisories=tuple(advisories))


def from_point_cloud(
    cloud: PointCloud,
    labels: Sequence[str] | None = None,
    advisory: bool = False,
) -> FiniteMetricSpace:
    """Build the metric space of a point cloud under its chosen norm."""
    pts = cloud.points
    n = len(pts)
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = _norm_distance(cloud.norm, pts[i], pts[j])
            matrix[i][j] = d
            matrix[j][i] = d
    if labels is None:
        labels = tuple("(" + ", ".join(repr(c) for c in p) + ")" for p in pts)
    return validate_metric(matrix, labels=labels, advisory=advisory)


def ball(
    space: FiniteMetricSpace, center: int, radius: float, kind: BallKind
) -> tuple[int, ...]:
    """Indices within ``radius`` of ``center``, ascending; comparison is exact."""
    if not 0 <= center < space.n:
        raise IndexOutOfRange(f"center {center} outside 0..{space.n - 1}")
    if not (radius > 0.0 and math.isfinite(radius)):
        raise DomainError(f"radius must be a positive finite real, got {radius!r}")
    row = space.dist[center]
    return tuple(j for j in range(space.n) if kind.contains(row[j], radius))


def critical_radii(space: FiniteMetricSpace) -> CriticalRadii:
    """Enumerate the radii that index every distinct ball family."""
    seen = set()
    for i in range(space.n):
        for j in range(i + 1, space.n):
            seen.add(space.dist[i][j])
    values = tuple(sorted(seen))
    mids = [values[0] / 2.0]
    for a, b in zip(values, values[1:]):
        mids.append((a + b) / 2.0)
    mids.append(values[-1] + values[0] / 2.0)
    return CriticalRadii(values=values, midpoints=tuple(mids))
