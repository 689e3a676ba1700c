"""Nets, ball covers, doubling sweeps, and cover-iteration arithmetic.

Exact searches (maximum independent set for nets, minimum set cover for
covers) run under a node budget and downgrade to the greedy construction,
with the report flagged non-optimal, when the budget runs out.  Candidate
cover centers are always drawn from the finite point set itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import DomainError, SearchBudgetExceeded, Uncoverable
from .metric import BallKind, FiniteMetricSpace, ball, critical_radii

DEFAULT_BUDGET = 10**6

# Values within this distance of an integer are snapped to it before taking
# a ceiling, so that logarithms of dyadic inputs cannot ceiling-jump by one
# ulp of rounding.
CEIL_GUARD = 1e-12


def guarded_ceil(x: float, guard: float = CEIL_GUARD) -> int:
    nearest = round(x)
    if abs(x - nearest) <= guard:
        return int(nearest)
    return math.ceil(x)


class NetKind(str, Enum):
    """Pairwise separation demanded of a net: strictly above or at least."""

    STRICT = "strict"
    NON_STRICT = "non-strict"

    def compatible(self, distance: float, radius: float) -> bool:
        """May two points at this distance share a net of this radius?"""
        if self is NetKind.STRICT:
            return distance > radius
        return distance >= radius

    @staticmethod
    def for_ball(kind: BallKind) -> "NetKind":
        # Strict nets pair with closed balls (and non-strict with open) so
        # that half-radius balls around net points stay disjoint.
        return NetKind.STRICT if kind is BallKind.CLOSED else NetKind.NON_STRICT


@dataclass(frozen=True)
class BallSpec:
    center: int
    radius: float
    kind: BallKind


@dataclass(frozen=True)
class NetReport:
    """A net with its separation certificate.

    ``maximal`` says no ambient point can be added; ``optimal`` says the
    cardinality is a proven maximum.
    """

    net_radius: float
    net_kind: NetKind
    ball: BallSpec | None
    ambient: tuple[int, ...]
    points: tuple[int, ...]
    cardinality: int
    maximal: bool
    optimal: bool
    nodes: int = 0


@dataclass(frozen=True)
class CoverReport:
    """A ball cover with its search certificate."""

    ball: BallSpec
    cover_radius: float
    centers: tuple[int, ...]
    size: int
    method: str  # "exact" | "greedy"
    optimal: bool
    certificate: dict


@dataclass(frozen=True)
class RadiusEntry:
    radius: float
    size: int
    center: int
    optimal: bool


@dataclass(frozen=True)
class DoublingReport:
    """Worst covering number over an exhaustive (center, radius) sweep."""

    kind: BallKind
    contraction: float
    entries: tuple[RadiusEntry, ...]
    constant: int
    witness_center: int
    witness_radius: float
    exact: bool


@dataclass(frozen=True)
class CoverIterationBounds:
    """Cover counts obtained by iterating a halving cover.

    From a cover constant N at contraction 1/2: at most
    N^ceil(-log2 t) balls of radius t*r cover any ball of radius r, for
    t in (0, 1).  From a cover constant N at contraction t in (1/2, 1):
    at most N^ceil(-1/log2 t) balls of radius r/2 suffice.
    """

    cover_count_at_t: int
    half_radius_count_from_t: int | None


@dataclass(frozen=True)
class ExpansionNetBound:
    """Measured largest net-in-expanded-ball cardinality vs its cover bound."""

    expansion: float
    measured: int
    witness_center: int
    witness_radius: float
    doubling_constant: int
    exponent: int
    bound: int
    holds: bool
    exact: bool


def is_net(
    space: FiniteMetricSpace,
    points: Iterable[int],
    radius: float,
    kind: NetKind,
) -> bool:
    """Check the pairwise separation condition."""
    pts = sorted(points)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if not kind.compatible(space.dist[pts[a]][pts[b]], radius):
                return False
    return True


def covers(
    space: FiniteMetricSpace,
    members: Iterable[int],
    centers: Iterable[int],
    cover_radius: float,
    kind: BallKind,
) -> bool:
    """Do the balls around ``centers`` contain every member point?"""
    centers = tuple(centers)
    for p in members:
        row = space.dist[p]
        if not any(kind.contains(row[c], cover_radius) for c in centers):
            return False
    return True


def greedy_maximal_net(
    space: FiniteMetricSpace,
    ambient: Iterable[int],
    radius: float,
    kind: NetKind,
) -> NetReport:
    """Maximal net by ascending-index insertion.

    Every ambient point is either selected or conflicts with a selected
    point, so the result is maximal; it is not necessarily of maximum
    cardinality.
    """
    pts = sorted(set(ambient))
    if not pts:
        raise DomainError("ambient set must be nonempty")
    if not (radius > 0.0 and math.isfinite(radius)):
        raise DomainError(f"net radius must be positive and finite, got {radius!r}")
    selected: list[int] = []
    for p in pts:
        if all(kind.compatible(space.dist[p][s], radius) for s in selected):
            selected.append(p)
    return NetReport(
        net_radius=radius,
        net_kind=kind,
        ball=None,
        ambient=tuple(pts),
        points=tuple(selected),
        cardinality=len(selected),
        maximal=True,
        optimal=False,
    )


def _conflict_masks(
    space: FiniteMetricSpace,
    members: Sequence[int],
    radius: float,
    kind: NetKind,
) -> list[int]:
    m = len(members)
    masks = [0] * m
    for a in range(m):
        row = space.dist[members[a]]
        for b in range(a + 1, m):
            if not kind.compatible(row[members[b]], radius):
                masks[a] |= 1 << b
                masks[b] |= 1 << a
    return masks


def _max_independent_set(masks: list[int], budget: int) -> tuple[int, int]:
    """Exact maximum independent set on a conflict graph given as bitmasks.

    Returns (best_mask, nodes).  Raises SearchBudgetExceeded past the budget.
    """
    n = len(masks)
    best_mask = 0
    best_size = 0
    nodes = 0

    def expand(pool: int, current: int, size: int) -> None:
        nonlocal best_mask, best_size, nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"independent-set search passed {budget} nodes")
        # Pull in vertices of degree 0 or 1 within the pool; always safe.
        changed = True
        while changed:
            changed = False
            scan = pool
            while scan:
                bit = scan & -scan
                scan ^= bit
                v = bit.bit_length() - 1
                adj = masks[v] & pool
                if adj == 0:
                    current |= bit
                    size += 1
                    pool ^= bit
                    changed = True
                elif adj & (adj - 1) == 0:
                    current |= bit
                    size += 1
                    pool &= ~(bit | adj)
                    changed = True
                    break
        if pool == 0:
            if size > best_size:
                best_size = size
                best_mask = current
            return
        if size + pool.bit_count() <= best_size:
            return
        # Branch on a vertex of maximum pool degree, lowest index first.
        pick = -1
        pick_degree = -1
        scan = pool
        while scan:
            bit = scan & -scan
            scan ^= bit
            v = bit.bit_length() - 1
            deg = (masks[v] & pool).bit_count()
            if deg > pick_degree:
                pick_degree = deg
                pick = v
        pick_bit = 1 << pick
        expand(pool & ~(pick_bit | masks[pick]), current | pick_bit, size + 1)
        expand(pool ^ pick_bit, current, size)

    expand((1 << n) - 1, 0, 0)
    return best_mask, nodes


def max_net_in_ball(
    space: FiniteMetricSpace,
    ball_spec: BallSpec,
    net_radius: float,
    net_kind: NetKind | None = None,
    mode: str = "exact",
    budget: int = DEFAULT_BUDGET,
) -> NetReport:
    """Largest net inside a ball, exactly (independent-set search) or greedily.

    ``net_kind`` defaults to the pairing dictated by the ball kind.  When the
    exact search exceeds its budget the greedy result is returned with
    ``optimal`` unset.
    """
    if net_kind is None:
        net_kind = NetKind.for_ball(ball_spec.kind)
    members = ball(space, ball_spec.center, ball_spec.radius, ball_spec.kind)
    if mode not in ("exact", "greedy"):
        raise DomainError(f"mode must be 'exact' or 'greedy', got {mode!r}")
    if mode == "exact":
        masks = _conflict_masks(space, members, net_radius, net_kind)
        try:
            best_mask, nodes = _max_independent_set(masks, budget)
            points = tuple(
                members[pos] for pos in range(len(members)) if best_mask >> pos & 1
            )
            return NetReport(
                net_radius=net_radius,
                net_kind=net_kind,
                ball=ball_spec,
                ambient=members,
                points=points,
                cardinality=len(points),
                maximal=True,
                optimal=True,
                nodes=nodes,
            )
        except SearchBudgetExceeded:
            pass
    greedy = greedy_maximal_net(space, members, net_radius, net_kind)
    return NetReport(
        net_radius=net_radius,
        net_kind=net_kind,
        ball=ball_spec,
        ambient=members,
        points=greedy.points,
        cardinality=greedy.cardinality,
        maximal=True,
        optimal=False,
    )


def _greedy_cover(universe: int, masks: Sequence[int]) -> list[int]:
    """Largest-uncovered-gain greedy cover; ties go to the lowest set index."""
    uncovered = universe
    chosen: list[int] = []
    while uncovered:
        best = -1
        best_gain = 0
        for idx, mask in enumerate(masks):
            gain = (mask & uncovered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best = idx
        chosen.append(best)
        uncovered &= ~masks[best]
    return chosen


def _min_set_cover(
    universe: int, masks: Sequence[int], budget: int
) -> tuple[list[int], int]:
    """Exact minimum set cover by branch and bound.

    Branches on an uncovered element of minimum frequency; prunes with the
    greedy incumbent and the best-remaining-gain lower bound.  Returns
    (chosen set indices, nodes).
    """
    m = universe.bit_count()
    element_sets: dict[int, list[int]] = {}
    scan = universe
    while scan:
        bit = scan & -scan
        scan ^= bit
        element_sets[bit] = [i for i, mask in enumerate(masks) if mask & bit]

    best = _greedy_cover(universe, masks)
    nodes = 0

    def search(uncovered: int, chosen: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"set-cover search passed {budget} nodes")
        if uncovered == 0:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        max_gain = 0
        for mask in masks:
            gain = (mask & uncovered).bit_count()
            if gain > max_gain:
                max_gain = gain
        if max_gain == 0:
            return
        lower = len(chosen) + -(-uncovered.bit_count() // max_gain)
        if lower >= len(best):
            return
        # Pick the uncovered element with the fewest candidate sets.
        pick_bit = 0
        pick_options: list[int] | None = None
        scan = uncovered
        while scan:
            bit = scan & -scan
            scan ^= bit
            options = [i for i in element_sets[bit] if masks[i] & uncovered & bit]
            if pick_options is None or len(options) < len(pick_options):
                pick_bit = bit
                pick_options = options
        assert pick_options is not None
        ordered = sorted(
            pick_options,
            key=lambda i: (-(masks[i] & uncovered).bit_count(), i),
        )
        for idx in ordered:
            chosen.append(idx)
            search(uncovered & ~masks[idx], chosen)
            chosen.pop()

    search(universe, [])
    return best, nodes


def min_cover_of_ball(
    space: FiniteMetricSpace,
    ball_spec: BallSpec,
    cover_radius: float,
    candidates: Iterable[int] | None = None,
    mode: str = "exact",
    budget: int = DEFAULT_BUDGET,
) -> CoverReport:
    """Cover a ball by candidate-centered balls of the same kind, minimally.

    Raises Uncoverable when some member of the ball lies outside every
    candidate ball.  On budget exhaustion in exact mode, returns the greedy
    cover flagged non-optimal.
    """
    if mode not in ("exact", "greedy"):
        raise DomainError(f"mode must be 'exact' or 'greedy', got {mode!r}")
    members = ball(space, ball_spec.center, ball_spec.radius, ball_spec.kind)
    if candidates is None:
        candidate_list = list(range(space.n))
    else:
        candidate_list = sorted(set(candidates))
    position = {p: pos for pos, p in enumerate(members)}
    universe = (1 << len(members)) - 1

    center_ids: list[int] = []
    masks: list[int] = []
    for c in candidate_list:
        row = space.dist[c]
        mask = 0
        for p, pos in position.items():
            if ball_spec.kind.contains(row[p], cover_radius):
                mask |= 1 << pos
        if mask:
            center_ids.append(c)
            masks.append(mask)

    covered = 0
    for mask in masks:
        covered |= mask
    if covered != universe:
        missing = [members[pos] for pos in range(len(members)) if not covered >> pos & 1]
        raise Uncoverable(
            f"points {missing} lie outside every candidate ball of radius {cover_radius!r}",
            uncovered=missing,
        )

    greedy_idx = _greedy_cover(universe, masks)
    if mode == "greedy":
        chosen = greedy_idx
        method = "greedy"
        optimal = False
        certificate = {"nodes": 0, "proved_minimum": False}
    else:
        try:
            exact_idx, nodes = _min_set_cover(universe, masks, budget)
            chosen = exact_idx
            method = "exact"
            optimal = True
            certificate = {
                "nodes": nodes,
                "proved_minimum": True,
                "no_cover_of_size": len(exact_idx) - 1,
            }
        except SearchBudgetExceeded:
            chosen = greedy_idx
            method = "greedy"
            optimal = False
            certificate = {"nodes": budget, "proved_minimum": False, "budget_exhausted": True}
    centers = tuple(sorted(center_ids[i] for i in chosen))
    report = CoverReport(
        ball=ball_spec,
        cover_radius=cover_radius,
        centers=centers,
        size=len(centers),
        method=method,
        optimal=optimal,
        certificate=certificate,
    )
    if not covers(space, members, centers, cover_radius, ball_spec.kind):
        raise AssertionError("cover post-check failed")  # pragma: no cover
    return report


def cover_sweep_radii(space: FiniteMetricSpace, contraction: float) -> tuple[float, ...]:
    """Radii enumerating every (ball, contracted-ball) family pair.

    Both the ambient family at r and the covering family at contraction*r
    are piecewise constant in r; their joint breakpoints are the pairwise
    distances and the distances divided by the contraction.  One radius per
    breakpoint and per open interval between them (plus one below and one
    above) is exhaustive.
    """
    values = critical_radii(space).values
    breakpoints = sorted(set(values) | {v / contraction for v in values})
    radii = [breakpoints[0] / 2.0]
    for a, b in zip(breakpoints, breakpoints[1:]):
        radii.append(a)
        radii.append((a + b) / 2.0)
    radii.append(breakpoints[-1])
    radii.append(breakpoints[-1] + breakpoints[0] / 2.0)
    return tuple(radii)


def doubling_constant(
    space: FiniteMetricSpace,
    kind: BallKind,
    contraction: float = 0.5,
    mode: str = "exact",
    budget: int = DEFAULT_BUDGET,
) -> DoublingReport:
    """Worst-case covering number of B(x, r) by balls of radius contraction*r.

    The sweep runs over every center and every radius at which either ball
    family can change, so the reported constant is the exact supremum over
    all radii for this finite space.  Candidate centers are all points.
    """
    if not (0.0 < contraction < 1.0):
        raise DomainError(f"contraction must lie in (0, 1), got {contraction!r}")
    entries: list[RadiusEntry] = []
    best_size = 0
    witness = (0, 0.0)
    all_exact = True
    for radius in cover_sweep_radii(space, contraction):
        radius_best = 0
        radius_center = 0
        radius_exact = True
        for center in range(space.n):
            report = min_cover_of_ball(
                space,
                BallSpec(center, radius, kind),
                contraction * radius,
                mode=mode,
                budget=budget,
            )
            if report.size > radius_best:
                radius_best = report.size
                radius_center = center
            radius_exact = radius_exact and report.optimal
        entries.append(
            RadiusEntry(radius=radius, size=radius_best, center=radius_center, optimal=radius_exact)
        )
        all_exact = all_exact and radius_exact
        if radius_best > best_size:
            best_size = radius_best
            witness = (radius_center, radius)
    return DoublingReport(
        kind=kind,
        contraction=contraction,
        entries=tuple(entries),
        constant=best_size,
        witness_center=witness[0],
        witness_radius=witness[1],
        exact=all_exact,
    )


def cover_iteration_bounds(n_sets: int, t: float) -> CoverIterationBounds:
    """Iterated-halving cover arithmetic; see CoverIterationBounds."""
    if not (isinstance(n_sets, int) and n_sets >= 1):
        raise DomainError(f"cover constant must be a positive integer, got {n_sets!r}")
    if not (0.0 < t < 1.0 and math.isfinite(t)):
        raise DomainError(f"contraction must lie in (0, 1), got {t!r}")
    k = guarded_ceil(-math.log2(t))
    at_t = n_sets**k
    from_t = None
    if t > 0.5:
        k_half = guarded_ceil(-1.0 / math.log2(t))
        from_t = n_sets**k_half
    return CoverIterationBounds(cover_count_at_t=at_t, half_radius_count_from_t=from_t)


def expansion_net_bound(
    space: FiniteMetricSpace,
    kind: BallKind,
    t: float,
    mode: str = "exact",
    budget: int = DEFAULT_BUDGET,
    doubling: DoublingReport | None = None,
) -> ExpansionNetBound:
    """Largest r-net in B(x, t*r) over all centers and critical radii,
    compared against doubling_constant ** ceil(log2(2t)).

    The comparison must hold on every finite space; a violation indicates a
    bug, not a property of the space.
    """
    if not (t > 1.0 and math.isfinite(t)):
        raise DomainError(f"expansion must exceed 1, got {t!r}")
    net_kind = NetKind.for_ball(kind)
    measured = 0
    witness = (0, 0.0)
    all_exact = True
    for radius in critical_radii(space).all_radii():
        for center in range(space.n):
            report = max_net_in_ball(
                space,
                BallSpec(center, t * radius, kind),
                radius,
                net_kind,
                mode=mode,
                budget=budget,
            )
            all_exact = all_exact and report.optimal
            if report.cardinality > measured:
                measured = report.cardinality
                witness = (center, radius)
    if doubling is None:
        doubling = doubling_constant(space, kind, 0.5, mode=mode, budget=budget)
    exponent = guarded_ceil(math.log2(2.0 * t))
    bound = doubling.constant**exponent
    return ExpansionNetBound(
        expansion=t,
        measured=measured,
        witness_center=witness[0],
        witness_radius=witness[1],
        doubling_constant=doubling.constant,
        exponent=exponent,
        bound=bound,
        holds=measured <= bound,
        exact=all_exact and doubling.exact,
    )
