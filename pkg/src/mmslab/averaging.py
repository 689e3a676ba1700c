"""Ball-averaging operators with an expansion factor, and their norms.

The operator maps a function f to the point map

    x  ->  ( sum of f(y) * weight(y) over y in B(x, t*r) ) / mass(B(x, r))

defined at every support point of the measure.  It contracts (t < 1) or
expands (t > 1) the integration ball relative to the normalizing ball.
The induced L1 norm equals the largest value of the conjugate kernel

    a(y) = sum over support x in B(y, t*r) of weight(x) / mass(B(x, r))

and the induced L-infinity norm is the largest ball-mass ratio
mass(B(x, t*r)) / mass(B(x, r)).  Both are computed exactly; induced Lp
norms for 1 < p < infinity are bracketed, not computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CrossCheckMismatch, DomainError, InvalidExponent
from .measure import PointMeasure, ball_measure
from .metric import BallKind, FiniteMetricSpace

# Relative tolerance for the mandatory conjugate-vs-matrix cross-check.
L1_CROSS_CHECK_RTOL = 1e-12


@dataclass(frozen=True)
class OperatorSpec:
    """Expansion factor t, radius r, and ball kind of an averaging operator."""

    t: float
    r: float
    kind: BallKind

    def __post_init__(self):
        if not (self.t > 0.0 and math.isfinite(self.t)):
            raise DomainError(f"expansion factor must be positive and finite, got {self.t!r}")
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise DomainError(f"radius must be positive and finite, got {self.r!r}")

    @property
    def expanded_radius(self) -> float:
        return self.t * self.r

    @property
    def is_subaveraging(self) -> bool:
        return self.t < 1.0

    @property
    def is_superaveraging(self) -> bool:
        return self.t > 1.0


@dataclass(frozen=True)
class OperatorMatrix:
    """Explicit matrix of the operator restricted to the support.

    rows[a][b] multiplies f at support point ``support[b]`` when evaluating
    at support point ``support[a]``.
    """

    support: tuple[int, ...]
    rows: tuple[tuple[float, ...], ...]

    def apply(self, f) -> list[float]:
        """Multiply against f given on all points of the space."""
        out = []
        for row in self.rows:
            total = 0.0
            for pos, y in enumerate(self.support):
                total += row[pos] * f[y]
            out.append(total)
        return out


@dataclass(frozen=True)
class ConjugateValues:
    """Conjugate kernel values per support point."""

    support: tuple[int, ...]
    values: tuple[float, ...]

    def max_with_witness(self) -> tuple[float, int]:
        best_pos = 0
        for pos in range(1, len(self.values)):
            if self.values[pos] > self.values[best_pos]:
                best_pos = pos
        return self.values[best_pos], self.support[best_pos]


@dataclass(frozen=True)
class NormCertificate:
    value: float
    argmax: int


@dataclass(frozen=True)
class LpBounds:
    """Bracket for an induced Lp norm; ``probe`` is the witnessing point of
    the lower bound, or None when the constant function witnesses it."""

    lower: float
    upper: float
    probe: int | None


def _check_pair(space: FiniteMetricSpace, measure: PointMeasure) -> None:
    if measure.n != space.n:
        raise DomainError(
            f"measure has {measure.n} weights for a {space.n}-point space"
        )


def _denominators(space, measure, spec) -> list[float]:
    # mass(B(x, r)) per support point x; positive since x carries weight.
    return [
        ball_measure(measure, space.ball(x, spec.r, spec.kind))
        for x in measure.support
    ]


def apply_averaging(
    space: FiniteMetricSpace,
    measure: PointMeasure,
    spec: OperatorSpec,
    f,
) -> list[float]:
    """Evaluate the operator at every support point, in support order."""
    _check_pair(space, measure)
    tr = spec.expanded_radius
    out = []
    for x in measure.support:
        num = 0.0
        for y in space.ball(x, tr, spec.kind):
            num += f[y] * measure.weights[y]
        den = ball_measure(measure, space.ball(x, spec.r, spec.kind))
        out.append(num / den)
    return out


def averaging_matrix(
    space: FiniteMetricSpace, measure: PointMeasure, spec: OperatorSpec
) -> OperatorMatrix:
    """Materialize the operator as a support-by-support matrix."""
    _check_pair(space, measure)
    supp = measure.support
    dens = _denominators(space, measure, spec)
    tr = spec.expanded_radius
    rows = []
    for pos_x, x in enumerate(supp):
        members = set(space.ball(x, tr, spec.kind))
        row = tuple(
            (measure.weights[y] / dens[pos_x]) if y in members else 0.0
            for y in supp
        )
        rows.append(row)
    return OperatorMatrix(support=supp, rows=tuple(rows))


def conjugate_values(
    space: FiniteMetricSpace, measure: PointMeasure, spec: OperatorSpec
) -> ConjugateValues:
    """Conjugate kernel a(y) over the support of the measure."""
    _check_pair(space, measure)
    supp = measure.support
    dens = _denominators(space, measure, spec)
    tr = spec.expanded_radius
    values = []
    for y in supp:
        row = space.dist[y]
        total = 0.0
        for pos_x, x in enumerate(supp):
            if spec.kind.contains(row[x], tr):
                total += measure.weights[x] / dens[pos_x]
        values.append(total)
    return ConjugateValues(support=supp, values=tuple(values))


def _weighted_column_max(matrix: OperatorMatrix, measure: PointMeasure) -> float:
    best = 0.0
    for pos_y, y in enumerate(matrix.support):
        col = 0.0
        for pos_x, x in enumerate(matrix.support):
            col += matrix.rows[pos_x][pos_y] * measure.weights[x]
        val = col / measure.weights[y]
        if val > best:
            best = val
    return best


def l1_norm(
    space: FiniteMetricSpace, measure: PointMeasure, spec: OperatorSpec
) -> NormCertificate:
    """Exact induced L1 norm with its maximizing support point.

    The conjugate-kernel maximum is cross-checked against the weighted
    column-sum norm of the explicit matrix; disagreement beyond
    L1_CROSS_CHECK_RTOL relative raises CrossCheckMismatch.
    """
    conj = conjugate_values(space, measure, spec)
    value, argmax = conj.max_with_witness()
    column_value = _weighted_column_max(averaging_matrix(space, measure, spec), measure)
    scale = max(abs(value), abs(column_value), 1.0)
    if abs(value - column_value) > L1_CROSS_CHECK_RTOL * scale:
        raise CrossCheckMismatch(
            f"conjugate max {value!r} vs column-sum norm {column_value!r}"
        )
    return NormCertificate(value=value, argmax=argmax)


def linf_norm(
    space: FiniteMetricSpace, measure: PointMeasure, spec: OperatorSpec
) -> NormCertificate:
    """Exact induced L-infinity norm: the largest ball-mass ratio."""
    _check_pair(space, measure)
    tr = spec.expanded_radius
    best = None
    best_x = None
    for x in measure.support:
        num = ball_measure(measure, space.ball(x, tr, spec.kind))
        den = ball_measure(measure, space.ball(x, spec.r, spec.kind))
        ratio = num / den
        if best is None or ratio > best:
            best = ratio
            best_x = x
    return NormCertificate(value=best, argmax=best_x)


def _weighted_p_norm(values, weights_for, p: float) -> float:
    total = 0.0
    for v, w in zip(values, weights_for):
        total += abs(v) ** p * w
    return total ** (1.0 / p)


def lp_norm_bounds(
    space: FiniteMetricSpace,
    measure: PointMeasure,
    spec: OperatorSpec,
    p: float,
) -> LpBounds:
    """Bracket the induced Lp norm for 1 < p < infinity.

    Lower bound: best probe among normalized one-point indicators and the
    constant function.  Upper bound: interpolation between the exact L1 and
    L-infinity norms, l1^(1/p) * linf^(1 - 1/p).
    """
    if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 1.0):
        raise InvalidExponent(f"exponent must lie in (1, inf), got {p!r}")
    p = float(p)
    matrix = averaging_matrix(space, measure, spec)
    supp = matrix.support
    supp_weights = [measure.weights[i] for i in supp]

    best = 0.0
    best_probe: int | None = supp[0]
    for pos_y, y in enumerate(supp):
        column = [matrix.rows[pos_x][pos_y] for pos_x in range(len(supp))]
        ratio = _weighted_p_norm(column, supp_weights, p) / measure.weights[y] ** (1.0 / p)
        if ratio > best:
            best = ratio
            best_probe = y
    row_sums = []
    for row in matrix.rows:
        total = 0.0
        for v in row:
            total += v
        row_sums.append(total)
    constant_ratio = _weighted_p_norm(row_sums, supp_weights, p) / measure.total_mass ** (
        1.0 / p
    )
    if constant_ratio > best:
        best = constant_ratio
        best_probe = None

    l1 = l1_norm(space, measure, spec).value
    linf = linf_norm(space, measure, spec).value
    upper = l1 ** (1.0 / p) * linf ** (1.0 - 1.0 / p)
    return LpBounds(lower=best, upper=upper, probe=best_probe)
