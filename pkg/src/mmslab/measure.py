"""Nonnegative weighted point measures: support, ball mass, Dirac sums.

All mass accumulation runs in ascending index order, which makes every
reported quantity bit-reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, IndexOutOfRange
from .metric import FiniteMetricSpace


@dataclass(frozen=True)
class PointMeasure:
    """Nonnegative weights on the points of a space, not identically zero."""

    weights: tuple[float, ...]
    support: tuple[int, ...] = field(init=False)
    total_mass: float = field(init=False)

    def __post_init__(self):
        ws = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        for i, w in enumerate(ws):
            if not math.isfinite(w) or w < 0.0:
                raise DomainError(f"weight {i} must be finite and >= 0, got {w!r}")
        supp = tuple(i for i, w in enumerate(ws) if w > 0.0)
        if not supp:
            raise DomainError("measure must not be identically zero")
        total = 0.0
        for w in ws:
            total += w
        object.__setattr__(self, "support", supp)
        object.__setattr__(self, "total_mass", total)

    @property
    def n(self) -> int:
        return len(self.weights)


def support(measure: PointMeasure) -> tuple[int, ...]:
    """Indices carrying strictly positive weight."""
    return measure.support


def ball_measure(measure: PointMeasure, ball: Iterable[int]) -> float:
    """Total mass of an index set, accumulated in ascending index order."""
    total = 0.0
    for i in sorted(ball):
        total += measure.weights[i]
    return total


def weighted_diracs(
    n: int | FiniteMetricSpace,
    centers: Sequence[int],
    masses: Sequence[float],
) -> PointMeasure:
    """Finite weighted sum of point masses: weights[i] = sum of masses at i."""
    size = n.n if isinstance(n, FiniteMetricSpace) else int(n)
    if len(centers) != len(masses):
        raise DomainError(
            f"{len(centers)} centers but {len(masses)} masses"
        )
    weights = [0.0] * size
    for c, m in zip(centers, masses):
        if not 0 <= c < size:
            raise IndexOutOfRange(f"center {c} outside 0..{size - 1}")
        if not (m > 0.0 and math.isfinite(m)):
            raise DomainError(f"mass at {c} must be positive and finite, got {m!r}")
        weights[c] += m
    return PointMeasure(tuple(weights))


def uniform_measure(n: int, mass: float = 1.0) -> PointMeasure:
    """Equal weight on every point."""
    return PointMeasure((float(mass),) * n)


def dirac_measure(n: int, index: int, mass: float = 1.0) -> PointMeasure:
    """All mass at one point."""
    return weighted_diracs(n, [index], [mass])
