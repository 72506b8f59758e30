"""Exhaustive axiom verification of aggregation rules.

A rule under test is a callable from a RankingProfile to the strict part of
its output relation (a StrictDigraph on all alternatives). The output is read
as a complete reflexive relation: a is weakly above b exactly when the arc
(b, a) is absent. The verifier enumerates the entire ranking space, the
product of all weak orders per individual, and checks:

* tv   - every output relation is transitive;
* pc   - pairs ranked strictly and unanimously by all common evaluators are
         reproduced strictly in the output;
* wpc  - such pairs are at least weakly reproduced;
* iia  - the output restriction to a pair depends only on the common
         evaluators' restrictions to that pair;
* nc   - no commonly evaluated pair has a constant outcome across the space;
* nd   - no complete individual is a quasi-dictator (an individual whose
         strict preferences are always reproduced).

Pairs that nobody evaluates in common are exempt from pc, wpc, iia and nc:
quantifying over them literally would force contradictory or vacuously
constant outcomes, so the checks range over commonly evaluated pairs only.
This scope choice changes verdicts and is deliberate.

Checks refuse to start when the ranking space exceeds the budget. Every
failure payload replays: feeding it back through ``replay`` reproduces the
violation from the axiom definition alone.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .aggregators import (
    aggregate_delegation,
    aggregate_unanimity,
    default_tiebreak,
    maximal_cycle_family,
    pair_delegates,
)
from .profiles import EvaluabilityProfile, ProfileError, complete_individuals
from .relations import (
    RankingProfile,
    StrictDigraph,
    WeakOrder,
    bits,
    ordered_bell,
    strict_part,
    weak_orders_on,
)

Arf = Callable[[RankingProfile], StrictDigraph]

AXIOM_IDS = ("tv", "pc", "wpc", "iia", "nc", "nd")
DEFAULT_BUDGET = 10_000_000
_CHUNK = 1024


class BudgetExceededError(RuntimeError):
    """The ranking space is larger than the configured budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"ranking space has {required} profiles, budget allows {budget}"
        )


@dataclass(frozen=True)
class Counterexample:
    """Replayable evidence of an axiom violation."""

    axiom: str
    rankings: RankingProfile | None = None
    rankings_alt: RankingProfile | None = None  # second profile, iia only
    pair: tuple[int, int] | None = None
    triple: tuple[int, int, int] | None = None  # tv violation (a, b, c)
    outcome: int | None = None  # nc: the constant pair outcome (+1, -1, 0)
    individual: int | None = None  # nd: the complete quasi-dictator


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    passed: bool
    counterexample: Counterexample | None


@dataclass(frozen=True)
class PropertyReport:
    axioms: tuple[AxiomVerdict, ...]
    quasi_dictators: tuple[int, ...] | None
    profile_space_size: int

    def verdict(self, axiom: str) -> AxiomVerdict:
        for v in self.axioms:
            if v.axiom == axiom:
                return v
        raise KeyError(axiom)

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.axioms)


def ranking_space_size(profile: EvaluabilityProfile) -> int:
    size = 1
    for m in profile.evaluable:
        size *= ordered_bell(m.bit_count())
    return size


def enumerate_rankings(profile: EvaluabilityProfile) -> Iterator[RankingProfile]:
    """Every ranking profile in deterministic product order."""
    per_individual = [weak_orders_on(m) for m in profile.evaluable]
    for combo in itertools.product(*per_individual):
        yield RankingProfile(combo)


def _common_pairs(profile: EvaluabilityProfile) -> list[tuple[int, int, tuple[int, ...]]]:
    ev = profile.evaluator_masks
    out = []
    for a in range(profile.n_alts):
        for b in range(a + 1, profile.n_alts):
            shared = ev[a] & ev[b]
            if shared:
                out.append((a, b, tuple(bits(shared))))
    return out


def _outcome(arcs: frozenset[tuple[int, int]], a: int, b: int) -> int:
    if (a, b) in arcs:
        return 1
    if (b, a) in arcs:
        return -1
    return 0


class _Verifier:
    """Single-pass accumulators for all requested axioms."""

    def __init__(self, profile: EvaluabilityProfile, axioms: Sequence[str]):
        self.profile = profile
        self.axioms = tuple(axioms)
        self.pairs = _common_pairs(profile)
        members = range(profile.n_alts)
        self.triples = [
            (x, y, z)
            for x in members
            for y in members
            if y != x
            for z in members
            if z != x and z != y
        ]
        self.want_tv = "tv" in self.axioms
        self.want_pc = "pc" in self.axioms
        self.want_wpc = "wpc" in self.axioms
        self.want_iia = "iia" in self.axioms
        self.want_nc = "nc" in self.axioms
        self.want_nd = "nd" in self.axioms
        self.tv_ce: Counterexample | None = None
        self.pc_ce: Counterexample | None = None
        self.wpc_ce: Counterexample | None = None
        self.iia_ce: Counterexample | None = None
        self.iia_first: dict[tuple[int, tuple[int, ...]], tuple[int, RankingProfile]] = {}
        self.nc_seen: list[set[int]] = [set() for _ in self.pairs]
        self.alive = [True] * profile.n_inds
        # per individual, the unordered pairs inside their evaluable set
        self.own_pairs = [
            list(itertools.combinations(sorted(bits(m)), 2))
            for m in profile.evaluable
        ]

    def feed(self, rankings: RankingProfile, output: StrictDigraph) -> None:
        arcs = output.arcs
        orders = rankings.orders
        if self.want_tv and self.tv_ce is None:
            for x, y, z in self.triples:
                # weak relation: x above y iff arc (y, x) is absent
                if (y, x) not in arcs and (z, y) not in arcs and (z, x) in arcs:
                    self.tv_ce = Counterexample("tv", rankings=rankings, triple=(x, y, z))
                    break
        for index, (a, b, evaluators) in enumerate(self.pairs):
            all_a = True
            all_b = True
            signature = []
            for v in evaluators:
                ranks = orders[v].ranks
                ra, rb = ranks[a], ranks[b]
                sign = 1 if ra < rb else (-1 if rb < ra else 0)
                signature.append(sign)
                if sign != 1:
                    all_a = False
                if sign != -1:
                    all_b = False
            out = _outcome(arcs, a, b)
            if self.want_pc and self.pc_ce is None:
                if (all_a and out != 1) or (all_b and out != -1):
                    self.pc_ce = Counterexample("pc", rankings=rankings, pair=(a, b))
            if self.want_wpc and self.wpc_ce is None:
                if (all_a and out == -1) or (all_b and out == 1):
                    self.wpc_ce = Counterexample("wpc", rankings=rankings, pair=(a, b))
            if self.want_iia:
                key = (index, tuple(signature))
                first = self.iia_first.get(key)
                if first is None:
                    self.iia_first[key] = (out, rankings)
                elif first[0] != out and self.iia_ce is None:
                    self.iia_ce = Counterexample(
                        "iia", rankings=first[1], rankings_alt=rankings, pair=(a, b)
                    )
            if self.want_nc:
                self.nc_seen[index].add(out)
        if self.want_nd:
            for v in range(self.profile.n_inds):
                if not self.alive[v]:
                    continue
                ranks = orders[v].ranks
                for a, b in self.own_pairs[v]:
                    ra, rb = ranks[a], ranks[b]
                    if ra < rb:
                        if (a, b) not in arcs:
                            self.alive[v] = False
                            break
                    elif rb < ra:
                        if (b, a) not in arcs:
                            self.alive[v] = False
                            break

    def finalize(self) -> tuple[tuple[AxiomVerdict, ...], tuple[int, ...] | None]:
        verdicts = []
        quasi: tuple[int, ...] | None = None
        for axiom in self.axioms:
            if axiom == "tv":
                verdicts.append(AxiomVerdict("tv", self.tv_ce is None, self.tv_ce))
            elif axiom == "pc":
                verdicts.append(AxiomVerdict("pc", self.pc_ce is None, self.pc_ce))
            elif axiom == "wpc":
                verdicts.append(AxiomVerdict("wpc", self.wpc_ce is None, self.wpc_ce))
            elif axiom == "iia":
                verdicts.append(AxiomVerdict("iia", self.iia_ce is None, self.iia_ce))
            elif axiom == "nc":
                ce = None
                for index, seen in enumerate(self.nc_seen):
                    if len(seen) == 1:
                        a, b, _ = self.pairs[index]
                        ce = Counterexample("nc", pair=(a, b), outcome=next(iter(seen)))
                        break
                verdicts.append(AxiomVerdict("nc", ce is None, ce))
            elif axiom == "nd":
                quasi = tuple(v for v, live in enumerate(self.alive) if live)
                complete = set(complete_individuals(self.profile))
                dictator = next((v for v in quasi if v in complete), None)
                ce = (
                    None
                    if dictator is None
                    else Counterexample("nd", individual=dictator)
                )
                verdicts.append(AxiomVerdict("nd", ce is None, ce))
        return tuple(verdicts), quasi


def verify_rule(
    arf: Arf,
    profile: EvaluabilityProfile,
    axioms: Sequence[str] = AXIOM_IDS,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> PropertyReport:
    """Check the requested axioms over the full ranking space in one pass.

    With ``threads`` > 1 the rule is evaluated in parallel over fixed chunks;
    the accumulators are fed in enumeration order, so the report is identical
    to the sequential run regardless of scheduling.
    """
    for axiom in axioms:
        if axiom not in AXIOM_IDS:
            raise ValueError(f"unknown axiom {axiom!r}")
    size = ranking_space_size(profile)
    if size > budget:
        raise BudgetExceededError(size, budget)
    verifier = _Verifier(profile, axioms)
    if threads <= 1:
        for rankings in enumerate_rankings(profile):
            verifier.feed(rankings, arf(rankings))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stream = enumerate_rankings(profile)
            while True:
                batch = list(itertools.islice(stream, _CHUNK))
                if not batch:
                    break
                for rankings, output in zip(batch, pool.map(arf, batch)):
                    verifier.feed(rankings, output)
    verdicts, quasi = verifier.finalize()
    return PropertyReport(verdicts, quasi, size)


def check_transitivity(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> AxiomVerdict:
    return verify_rule(arf, profile, ("tv",), budget).axioms[0]


def check_pareto(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> AxiomVerdict:
    return verify_rule(arf, profile, ("pc",), budget).axioms[0]


def check_weak_pareto(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> AxiomVerdict:
    return verify_rule(arf, profile, ("wpc",), budget).axioms[0]


def check_iia(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> AxiomVerdict:
    return verify_rule(arf, profile, ("iia",), budget).axioms[0]


def check_nonconstancy(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> AxiomVerdict:
    return verify_rule(arf, profile, ("nc",), budget).axioms[0]


def check_nondictatorship(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> AxiomVerdict:
    return verify_rule(arf, profile, ("nd",), budget).axioms[0]


def quasi_dictators(arf: Arf, profile, budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    """Individuals whose strict preferences are reproduced on every profile."""
    report = verify_rule(arf, profile, ("nd",), budget)
    assert report.quasi_dictators is not None
    return report.quasi_dictators


def replay(arf: Arf, profile: EvaluabilityProfile, ce: Counterexample) -> bool:
    """Re-validate a counterexample against the axiom definition."""
    if ce.axiom == "tv":
        assert ce.rankings is not None and ce.triple is not None
        arcs = arf(ce.rankings).arcs
        x, y, z = ce.triple
        return (y, x) not in arcs and (z, y) not in arcs and (z, x) in arcs
    if ce.axiom in ("pc", "wpc"):
        assert ce.rankings is not None and ce.pair is not None
        a, b = ce.pair
        evaluators = [v for v in range(profile.n_inds) if _evaluates_both(profile, v, a, b)]
        if not evaluators:
            return False
        out = _outcome(arf(ce.rankings).arcs, a, b)
        all_a = all(ce.rankings.orders[v].prefers(a, b) for v in evaluators)
        all_b = all(ce.rankings.orders[v].prefers(b, a) for v in evaluators)
        if ce.axiom == "pc":
            return (all_a and out != 1) or (all_b and out != -1)
        return (all_a and out == -1) or (all_b and out == 1)
    if ce.axiom == "iia":
        assert ce.rankings is not None and ce.rankings_alt is not None and ce.pair is not None
        a, b = ce.pair
        evaluators = [v for v in range(profile.n_inds) if _evaluates_both(profile, v, a, b)]
        same_inputs = all(
            _pair_sign(ce.rankings.orders[v], a, b)
            == _pair_sign(ce.rankings_alt.orders[v], a, b)
            for v in evaluators
        )
        return same_inputs and _outcome(arf(ce.rankings).arcs, a, b) != _outcome(
            arf(ce.rankings_alt).arcs, a, b
        )
    if ce.axiom == "nc":
        assert ce.pair is not None and ce.outcome is not None
        a, b = ce.pair
        return all(
            _outcome(arf(r).arcs, a, b) == ce.outcome
            for r in enumerate_rankings(profile)
        )
    if ce.axiom == "nd":
        assert ce.individual is not None
        v = ce.individual
        if profile.evaluable[v] != profile.full_mask:
            return False
        own = list(itertools.combinations(sorted(bits(profile.evaluable[v])), 2))
        for rankings in enumerate_rankings(profile):
            arcs = arf(rankings).arcs
            ranks = rankings.orders[v].ranks
            for a, b in own:
                if ranks[a] < ranks[b] and (a, b) not in arcs:
                    return False
                if ranks[b] < ranks[a] and (b, a) not in arcs:
                    return False
        return True
    raise ValueError(f"unknown axiom {ce.axiom!r}")


def _evaluates_both(profile: EvaluabilityProfile, v: int, a: int, b: int) -> bool:
    m = profile.evaluable[v]
    return bool((m >> a) & 1 and (m >> b) & 1)


def _pair_sign(order: WeakOrder, a: int, b: int) -> int:
    ra, rb = order.ranks[a], order.ranks[b]
    return 1 if ra < rb else (-1 if rb < ra else 0)


# ---------------------------------------------------------------------------
# Builtin rule zoo. "fstar" and "fstarstar" are the constructive rules; the
# rest exist to exercise failing verdicts.
# ---------------------------------------------------------------------------

RULE_IDS = ("fstar", "fstarstar", "constant", "majority", "dictatorship")


def make_rule(
    rule_id: str,
    profile: EvaluabilityProfile,
    tiebreak: WeakOrder | None = None,
) -> Arf:
    """Build a rule closure for a fixed profile.

    ``fstar`` extends the unanimity relation; ``fstarstar`` is the delegation
    rule (requires cycle cover); ``constant`` always returns the tiebreak
    order; ``majority`` takes pairwise majorities among common evaluators
    with ties as indifference; ``dictatorship[:ID]`` reproduces one
    individual's order with everyone else's alternatives tied at the bottom.
    """
    name, _, argument = rule_id.partition(":")
    tb = tiebreak if tiebreak is not None else default_tiebreak(profile)
    if not tb.is_linear or tb.ground != profile.full_mask:
        raise ValueError("tiebreak must be a linear order on all alternatives")
    if name == "fstar":

        def fstar(rankings: RankingProfile) -> StrictDigraph:
            return strict_part(aggregate_unanimity(profile, rankings, tb).order)

        return fstar
    if name == "fstarstar":
        family = maximal_cycle_family(profile)
        delegates = pair_delegates(profile, family)

        def fstarstar(rankings: RankingProfile) -> StrictDigraph:
            result = aggregate_delegation(profile, rankings, tb, family)
            return strict_part(result.order)

        return fstarstar
    if name == "constant":
        fixed = strict_part(tb)
        return lambda rankings: fixed
    if name == "majority":
        pairs = _common_pairs(profile)
        full = profile.full_mask

        def majority(rankings: RankingProfile) -> StrictDigraph:
            arcs = []
            for a, b, evaluators in pairs:
                tally = 0
                for v in evaluators:
                    ranks = rankings.orders[v].ranks
                    ra, rb = ranks[a], ranks[b]
                    tally += (ra < rb) - (rb < ra)
                if tally > 0:
                    arcs.append((a, b))
                elif tally < 0:
                    arcs.append((b, a))
            return StrictDigraph(full, frozenset(arcs))

        return majority
    if name == "dictatorship":
        if argument:
            if argument not in profile.ind_index:
                raise ProfileError(f"unknown individual {argument!r}")
            chief = profile.ind_index[argument]
        else:
            chief = 0
        rest = profile.full_mask & ~profile.evaluable[chief]

        def dictatorship(rankings: RankingProfile) -> StrictDigraph:
            tiers = rankings.orders[chief].tiers
            if rest:
                tiers = tiers + (rest,)
            return strict_part(WeakOrder(tiers))

        return dictatorship
    raise ValueError(f"unknown rule {rule_id!r}")
