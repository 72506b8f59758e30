import itertools

import pytest
from hypothesis import given, strategies as st

from rankagg.relations import (
    CyclicRelationError,
    StrictDigraph,
    WeakOrder,
    bits,
    enumerate_weak_orders,
    extends,
    indifferent_pairs,
    is_acyclic,
    is_antisymmetric,
    is_asymmetric,
    is_transitive,
    linear_extension,
    mask_of,
    ordered_bell,
    relation_pairs,
    restrict,
    strict_part,
    weak_orders_on,
)

from helpers import (
    all_linear_extensions,
    ordered_bell_recurrence,
    pairs_complete,
    pairs_reflexive,
    pairs_transitive,
    weak_order_pairs,
)


def linear(*seq):
    return WeakOrder.from_ranking(seq)


def tiers(*groups):
    return WeakOrder.from_tiers(groups)


# -- weak order basics -------------------------------------------------------


def test_weak_order_rejects_overlapping_tiers():
    with pytest.raises(ValueError):
        WeakOrder((0b011, 0b110))


def test_weak_order_rejects_empty_tier():
    with pytest.raises(ValueError):
        WeakOrder((0b01, 0))


def test_linear_detection():
    assert linear(0, 1, 2).is_linear
    assert not tiers([0, 1], [2]).is_linear


# -- strict part -------------------------------------------------------------


def test_strict_part_of_linear_order():
    got = strict_part(linear(0, 1, 2))
    assert got.arcs == {(0, 1), (0, 2), (1, 2)}


def test_strict_part_with_tied_top():
    got = strict_part(tiers([0, 1], [2]))
    assert got.arcs == {(0, 2), (1, 2)}


def test_strict_part_of_total_indifference():
    assert strict_part(tiers([0, 1, 2])).arcs == frozenset()


def test_symmetric_part_complements_strict_part():
    order = tiers([0, 3], [1], [2, 4])
    strict = strict_part(order).arcs
    ties = indifferent_pairs(order)
    members = sorted(bits(order.ground))
    for a, b in itertools.combinations(members, 2):
        in_strict = (a, b) in strict or (b, a) in strict
        assert in_strict != ((a, b) in ties)


# -- restriction -------------------------------------------------------------


def test_restrict_drops_middle_element():
    got = restrict(linear(0, 1, 2), mask_of([0, 2]))
    assert got == linear(0, 2)


def test_restrict_rotation_order():
    # rotation pivoted at the first of three cycle nodes: a1, a3, a2
    rotation = linear(0, 2, 1)
    got = restrict(rotation, mask_of([1, 2]))
    assert got == linear(2, 1)


def test_restrict_to_ground_is_identity():
    order = tiers([0, 1], [2])
    assert restrict(order, order.ground) == order


def test_restrict_outside_ground_rejected():
    with pytest.raises(ValueError):
        restrict(linear(0, 1), mask_of([0, 2]))


def test_restrict_to_empty_set():
    assert restrict(linear(0, 1, 2), 0) == WeakOrder(())


# -- acyclicity --------------------------------------------------------------


def test_chain_is_acyclic():
    ok, witness = is_acyclic(StrictDigraph(0b111, frozenset({(0, 1), (1, 2)})))
    assert ok and witness is None


def test_triangle_cycle_witnessed():
    d = StrictDigraph(0b111, frozenset({(0, 1), (1, 2), (2, 0)}))
    ok, witness = is_acyclic(d)
    assert not ok
    length = len(witness)
    for i, a in enumerate(witness):
        assert (a, witness[(i + 1) % length]) in d.arcs


def test_asymmetry_enforced_at_construction():
    with pytest.raises(ValueError):
        StrictDigraph(0b11, frozenset({(0, 1), (1, 0)}))


def test_worked_example_constraint_is_acyclic():
    arcs = {
        (1, 3), (1, 0), (1, 2), (3, 0), (3, 2),
        (0, 2), (4, 5), (4, 3), (5, 3), (6, 5),
    }
    ok, _ = is_acyclic(StrictDigraph(0b1111111, frozenset(arcs)))
    assert ok


# -- linear extension --------------------------------------------------------


def test_extension_of_empty_constraints_is_tiebreak():
    d = StrictDigraph(0b111, frozenset())
    assert linear_extension(d, linear(0, 1, 2)) == linear(0, 1, 2)
    assert linear_extension(d, linear(2, 0, 1)) == linear(2, 0, 1)


def test_extension_of_chain_ignores_tiebreak():
    d = StrictDigraph(0b111, frozenset({(0, 1), (1, 2)}))
    assert linear_extension(d, linear(2, 1, 0)) == linear(0, 1, 2)


def test_extension_on_cycle_raises():
    d = StrictDigraph(0b111, frozenset({(0, 1), (1, 2), (2, 0)}))
    with pytest.raises(CyclicRelationError):
        linear_extension(d, linear(0, 1, 2))


def test_worked_example_extension_contains_all_arcs():
    arcs = frozenset({
        (1, 3), (1, 0), (1, 2), (3, 0), (3, 2),
        (0, 2), (4, 5), (4, 3), (5, 3), (6, 5),
    })
    d = StrictDigraph(0b1111111, arcs)
    out = linear_extension(d, WeakOrder.from_ranking(range(7)))
    assert extends(out, d)
    # a hand-picked alternative sequence is itself a valid extension
    assert extends(WeakOrder.from_ranking([1, 4, 6, 5, 3, 0, 2]), d)


def test_extension_matches_brute_force_membership():
    arcs = {(0, 2), (3, 1)}
    d = StrictDigraph(0b1111, frozenset(arcs))
    out = linear_extension(d, linear(0, 1, 2, 3))
    valid = all_linear_extensions([0, 1, 2, 3], arcs)
    assert out.as_sequence() in valid


# -- enumeration -------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541)])
def test_weak_order_counts(n, expected):
    mask = (1 << n) - 1
    orders = list(enumerate_weak_orders(mask))
    assert len(orders) == expected
    assert len(set(orders)) == expected
    assert ordered_bell(n) == expected
    assert ordered_bell_recurrence(n) == expected


def test_enumerated_orders_are_weak_orders():
    for order in enumerate_weak_orders(0b1111):
        pairs = relation_pairs(order)
        members = sorted(bits(order.ground))
        assert pairs_reflexive(pairs, members)
        assert pairs_complete(pairs, members)
        assert pairs_transitive(pairs)
        assert pairs == weak_order_pairs(order.to_lists())


def test_enumeration_is_deterministic():
    first = list(enumerate_weak_orders(0b111))
    second = list(enumerate_weak_orders(0b111))
    assert first == second
    assert weak_orders_on(0b111) == tuple(first)


def test_enumeration_rejects_empty_ground():
    with pytest.raises(ValueError):
        next(enumerate_weak_orders(0))


# -- property tests ----------------------------------------------------------


@st.composite
def weak_orders(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    perm = draw(st.permutations(list(range(n))))
    cuts = draw(st.sets(st.integers(min_value=1, max_value=n - 1)) if n > 1 else st.just(set()))
    bounds = [0] + sorted(cuts) + [n]
    groups = [perm[bounds[i]:bounds[i + 1]] for i in range(len(bounds) - 1)]
    return WeakOrder.from_tiers(groups)


@st.composite
def acyclic_digraphs(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    perm = draw(st.permutations(list(range(n))))
    chosen = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                chosen.append((perm[i], perm[j]))
    return StrictDigraph((1 << n) - 1, frozenset(chosen))


@given(weak_orders())
def test_strict_part_is_asymmetric_and_transitive(order):
    arcs = strict_part(order).arcs
    assert is_asymmetric(arcs)
    assert is_transitive(arcs)


@given(acyclic_digraphs())
def test_extension_properties(digraph):
    tiebreak = WeakOrder.from_ranking(sorted(bits(digraph.ground)))
    out = linear_extension(digraph, tiebreak)
    assert extends(out, digraph)
    pairs = relation_pairs(out)
    members = sorted(bits(out.ground))
    assert pairs_reflexive(pairs, members)
    assert pairs_complete(pairs, members)
    assert pairs_transitive(pairs)
    assert is_antisymmetric(pairs)
    # idempotent: extending an already-linear constraint reproduces it
    assert linear_extension(strict_part(out), tiebreak) == out


@given(acyclic_digraphs())
def test_constructed_acyclic_digraphs_verify(digraph):
    ok, _ = is_acyclic(digraph)
    assert ok
