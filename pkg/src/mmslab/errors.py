"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One failed metric axiom together with the indices that witness it.

    Kinds: ``asymmetric`` (i, j), ``nonzero-diagonal`` (i,),
    ``negative-distance`` (i, j), ``duplicate-points`` (i, j),
    ``nonfinite`` (i, j), ``triangle`` (i, k, j) meaning
    dist[i][k] > dist[i][j] + dist[j][k].
    """

    kind: str
    indices: tuple
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.kind}{self.indices}"
        return f"{text}: {self.detail}" if self.detail else text


class InvalidMetric(ValueError):
    """A distance matrix fails validation; carries every violation found."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__(
            "matrix is not a metric: " + "; ".join(str(v) for v in self.violations)
        )


class DuplicatePoints(InvalidMetric):
    """Two points of a cloud (or rows of a matrix) coincide."""

    def __init__(self, i: int, j: int):
        super().__init__([Violation("duplicate-points", (i, j))])


class DomainError(ValueError):
    """A parameter lies outside its mathematical domain."""


class InvalidExponent(DomainError):
    """Integrability exponent outside the open interval (1, infinity)."""


class IndexOutOfRange(IndexError):
    """A point index does not belong to the space."""


class CrossCheckMismatch(RuntimeError):
    """Two independent computations of the same quantity disagree.

    This always signals an implementation bug, never an expected condition.
    """


class Uncoverable(ValueError):
    """A cover instance has a target point outside every candidate ball."""

    def __init__(self, message: str, uncovered=()):
        super().__init__(message)
        self.uncovered = tuple(uncovered)


class EmptyNet(ValueError):
    """No net point is available for the requested construction."""


class SearchBudgetExceeded(RuntimeError):
    """An exact search ran past its node budget."""
