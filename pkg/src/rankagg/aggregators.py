"""The two constructive aggregation rules.

``aggregate_unanimity`` extends the unanimity relation: pair (a, b) is
constrained exactly when everyone who evaluates both strictly agrees. The
constraint is acyclic whenever the profile passes the cycle-cover check, and
any deterministic linear extension of it is transitive and Pareto-consistent.

``aggregate_delegation`` decides every commonly evaluated pair through a
single designated individual. Pairs inside a maximal cyclic node set
(including its chords) are delegated to that set's dictator, an individual
who evaluates the whole set; remaining pairs go to the first common evaluator
in input order. Ties of the designated individual fall through to a global
linear tiebreak. Because each pair's outcome depends only on one fixed
individual's restriction to that pair, the rule is independent of irrelevant
alternatives, and its constraint relation is always acyclic under cycle
cover.

Every arbitrary choice is pinned (first eligible individual, smallest
maximal set containing the smallest uncovered node, input-order tiebreak), so
both rules are functions: identical inputs give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conditions import ConditionViolationError, check_cycle_cover, maximal_cyclic_sets
from .profiles import (
    EvaluabilityProfile,
    UnionGraph,
    build_union_graph,
    validate_rankings,
)
from .relations import (
    RankingProfile,
    StrictDigraph,
    WeakOrder,
    bits,
    is_acyclic,
    linear_extension,
)


@dataclass(frozen=True)
class MaximalCycleFamily:
    """Maximal cyclic node sets covering every cycle-touched node.

    ``sets`` are pairwise non-nested node masks, ``residual`` holds the nodes
    on no cycle at all, and ``dictators[x]`` is an individual whose evaluable
    set contains ``sets[x]``.
    """

    sets: tuple[int, ...]
    residual: int
    dictators: tuple[int, ...]


@dataclass(frozen=True)
class AggregationResult:
    """Constraint relation, the returned order, and the degenerate flag.

    ``degenerate`` is set when the constraint was cyclic and the fallback
    all-indifferent order was returned; no axiom is promised on that branch.
    """

    constraint: StrictDigraph
    order: WeakOrder
    degenerate: bool


def default_tiebreak(profile: EvaluabilityProfile) -> WeakOrder:
    """Linear tiebreak in alternative input order."""
    return WeakOrder.from_ranking(range(profile.n_alts))


def _check_tiebreak(profile: EvaluabilityProfile, tiebreak: WeakOrder | None) -> WeakOrder:
    if tiebreak is None:
        return default_tiebreak(profile)
    if not tiebreak.is_linear or tiebreak.ground != profile.full_mask:
        raise ValueError("tiebreak must be a linear order on all alternatives")
    return tiebreak


def unanimity_relation(profile: EvaluabilityProfile, rankings: RankingProfile) -> StrictDigraph:
    """Arc (a, b) iff some individual evaluates both and all such individuals
    strictly prefer a to b."""
    validate_rankings(profile, rankings)
    return _unanimity_arcs(profile, rankings)


def _unanimity_arcs(profile: EvaluabilityProfile, rankings: RankingProfile) -> StrictDigraph:
    ev = profile.evaluator_masks
    arcs = []
    n = profile.n_alts
    for a in range(n):
        for b in range(a + 1, n):
            shared = ev[a] & ev[b]
            if not shared:
                continue
            a_over_b = True
            b_over_a = True
            for v in bits(shared):
                ranks = rankings.orders[v].ranks
                ra, rb = ranks[a], ranks[b]
                if ra >= rb:
                    a_over_b = False
                if rb >= ra:
                    b_over_a = False
                if not a_over_b and not b_over_a:
                    break
            if a_over_b:
                arcs.append((a, b))
            elif b_over_a:
                arcs.append((b, a))
    return StrictDigraph(profile.full_mask, frozenset(arcs))


def _all_indifferent(profile: EvaluabilityProfile) -> WeakOrder:
    return WeakOrder((profile.full_mask,))


def aggregate_unanimity(
    profile: EvaluabilityProfile,
    rankings: RankingProfile,
    tiebreak: WeakOrder | None = None,
) -> AggregationResult:
    """Extend the unanimity relation to a linear order.

    When the unanimity relation is cyclic (possible only if the cycle-cover
    check fails), returns the all-indifferent order flagged degenerate.
    """
    tb = _check_tiebreak(profile, tiebreak)
    constraint = unanimity_relation(profile, rankings)
    acyclic, _ = is_acyclic(constraint)
    if not acyclic:
        return AggregationResult(constraint, _all_indifferent(profile), True)
    return AggregationResult(constraint, linear_extension(constraint, tb), False)


def maximal_cycle_family(
    profile: EvaluabilityProfile, graph: UnionGraph | None = None
) -> MaximalCycleFamily:
    """Deterministic family of maximal cyclic sets with per-set dictators.

    Repeatedly picks the smallest (bitmask order) maximal cyclic set
    containing the smallest not-yet-covered node that lies on some cycle.
    Distinct maximal sets are never nested, and under cycle cover their node
    sets pairwise share at most one node. Raises ConditionViolationError when
    the cycle-cover check fails, carrying the uncovered cycle.
    """
    g = graph if graph is not None else build_union_graph(profile)
    cover = check_cycle_cover(profile, g)
    if not cover.holds:
        raise ConditionViolationError(
            "cycle cover fails; no dictator exists for some cycle",
            cycle=cover.uncovered_cycle,
        )
    maximal = maximal_cyclic_sets(g)
    cycle_nodes = 0
    for m in maximal:
        cycle_nodes |= m
    sets: list[int] = []
    dictators: list[int] = []
    covered = 0
    while cycle_nodes & ~covered:
        lowest = cycle_nodes & ~covered
        node_bit = lowest & -lowest
        chosen = min(m for m in maximal if m & node_bit)
        dictator = next(
            (v for v, c in enumerate(profile.evaluable) if chosen & ~c == 0), None
        )
        if dictator is None:  # unreachable once the cover check passed
            raise RuntimeError("maximal cyclic set lost its covering individual")
        sets.append(chosen)
        dictators.append(dictator)
        covered |= chosen
    return MaximalCycleFamily(tuple(sets), profile.full_mask & ~covered, tuple(dictators))


def pair_delegates(
    profile: EvaluabilityProfile, family: MaximalCycleFamily
) -> dict[tuple[int, int], int]:
    """Designated individual for every commonly evaluated pair (a < b).

    Pairs inside a family set go to its dictator; under cycle cover the
    containing set is unique because set intersections have at most one node.
    Every other pair with a common evaluator goes to the first one in input
    order. The map depends only on the profile and family, never on submitted
    rankings, which is what makes the delegation rule independent of
    irrelevant alternatives.
    """
    ev = profile.evaluator_masks
    n = profile.n_alts
    out: dict[tuple[int, int], int] = {}
    for a in range(n):
        for b in range(a + 1, n):
            shared = ev[a] & ev[b]
            if not shared:
                continue
            pair_mask = (1 << a) | (1 << b)
            delegate = None
            for s, v in zip(family.sets, family.dictators):
                if pair_mask & ~s == 0:
                    delegate = v
                    break
            if delegate is None:
                delegate = (shared & -shared).bit_length() - 1
            out[(a, b)] = delegate
    return out


def delegation_relation(
    profile: EvaluabilityProfile,
    rankings: RankingProfile,
    family: MaximalCycleFamily,
    tiebreak: WeakOrder | None = None,
    pair_assignment: dict[tuple[int, int], int] | None = None,
) -> StrictDigraph:
    """One arc per commonly evaluated pair, decided by the designated
    individual with ties resolved by the global tiebreak."""
    validate_rankings(profile, rankings)
    tb = _check_tiebreak(profile, tiebreak)
    delegates = pair_assignment if pair_assignment is not None else pair_delegates(profile, family)
    return _delegation_arcs(rankings, delegates, tb)


def _delegation_arcs(
    rankings: RankingProfile,
    delegates: dict[tuple[int, int], int],
    tiebreak: WeakOrder,
) -> StrictDigraph:
    arcs = []
    for (a, b), v in delegates.items():
        ranks = rankings.orders[v].ranks
        ra, rb = ranks[a], ranks[b]
        if ra < rb:
            arcs.append((a, b))
        elif rb < ra:
            arcs.append((b, a))
        elif tiebreak.ranks[a] < tiebreak.ranks[b]:
            arcs.append((a, b))
        else:
            arcs.append((b, a))
    return StrictDigraph(tiebreak.ground, frozenset(arcs))


def aggregate_delegation(
    profile: EvaluabilityProfile,
    rankings: RankingProfile,
    tiebreak: WeakOrder | None = None,
    family: MaximalCycleFamily | None = None,
) -> AggregationResult:
    """Extend the delegation relation to a linear order.

    Requires the cycle-cover check to hold (the family construction raises
    otherwise). The constraint is acyclic under cycle cover; the degenerate
    fallback is kept for defensive completeness only.
    """
    tb = _check_tiebreak(profile, tiebreak)
    fam = family if family is not None else maximal_cycle_family(profile)
    constraint = delegation_relation(profile, rankings, fam, tb)
    acyclic, _ = is_acyclic(constraint)
    if not acyclic:  # unreachable under cycle cover
        return AggregationResult(constraint, _all_indifferent(profile), True)
    return AggregationResult(constraint, linear_extension(constraint, tb), False)
