"""Independent oracles used by the tests.

Everything here recomputes expectations from first principles (explicit pair
sets, permutation sweeps, recurrences) without touching the library's own
shortcut representations, so the two sides of each comparison stay
independent.
"""

from __future__ import annotations

import itertools
import random

from rankagg.profiles import EvaluabilityProfile


def ordered_bell_recurrence(n: int) -> int:
    """a(n) = sum_{k>=1} C(n, k) * a(n - k), a(0) = 1."""
    table = [1]
    for size in range(1, n + 1):
        total = 0
        for k in range(1, size + 1):
            total += _binomial(size, k) * table[size - k]
        table.append(total)
    return table[n]


def _binomial(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def weak_order_pairs(tiers: list[list[int]]) -> set[tuple[int, int]]:
    """Explicit pair set of a tier list: (a, b) whenever tier(a) <= tier(b)."""
    rank = {}
    for i, tier in enumerate(tiers):
        for a in tier:
            rank[a] = i
    return {(a, b) for a in rank for b in rank if rank[a] <= rank[b]}


def pairs_reflexive(pairs: set[tuple[int, int]], members: list[int]) -> bool:
    return all((a, a) in pairs for a in members)


def pairs_complete(pairs: set[tuple[int, int]], members: list[int]) -> bool:
    return all((a, b) in pairs or (b, a) in pairs for a in members for b in members)


def pairs_transitive(pairs: set[tuple[int, int]]) -> bool:
    return all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)


def simple_cycles(adjacency: tuple[int, ...], n: int) -> list[tuple[int, ...]]:
    """Every simple cycle (length >= 3) as a canonical node sequence.

    Canonical form: smallest node first, second node smaller than the last,
    which picks one representative per cycle and direction.
    """
    out = []
    for k in range(3, n + 1):
        for subset in itertools.combinations(range(n), k):
            first, rest = subset[0], subset[1:]
            for perm in itertools.permutations(rest):
                if perm[0] > perm[-1]:
                    continue
                seq = (first,) + perm
                if all(
                    (adjacency[seq[i]] >> seq[(i + 1) % k]) & 1 for i in range(k)
                ):
                    out.append(seq)
    return out


def naive_cycle_cover(profile: EvaluabilityProfile) -> tuple[bool, tuple[int, ...] | None]:
    """Cycle-cover decision by explicit enumeration of every simple cycle."""
    adjacency = [0] * profile.n_alts
    for m in profile.evaluable:
        current = m
        while current:
            low = current & -current
            a = low.bit_length() - 1
            current ^= low
            adjacency[a] |= m ^ (1 << a)
    for seq in simple_cycles(tuple(adjacency), profile.n_alts):
        mask = 0
        for a in seq:
            mask |= 1 << a
        if not any(mask & ~c == 0 for c in profile.evaluable):
            return False, seq
    return True, None


def naive_hamiltonian(adjacency: tuple[int, ...], n: int) -> bool:
    """Spanning-cycle existence by permutation sweep."""
    if n < 3:
        return False
    for perm in itertools.permutations(range(1, n)):
        seq = (0,) + perm
        if all((adjacency[seq[i]] >> seq[(i + 1) % n]) & 1 for i in range(n)):
            return True
    return False


def all_linear_extensions(ground: list[int], arcs: set[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Every permutation of ``ground`` consistent with ``arcs``."""
    out = []
    for perm in itertools.permutations(ground):
        position = {a: i for i, a in enumerate(perm)}
        if all(position[a] < position[b] for a, b in arcs):
            out.append(perm)
    return out


def random_profile(rng: random.Random, n_alts: int, n_inds: int = 3) -> EvaluabilityProfile:
    """Uniformly random evaluable sets of size >= 2 over generic names."""
    masks = []
    candidates = [m for m in range(1 << n_alts) if bin(m).count("1") >= 2]
    for _ in range(n_inds):
        masks.append(rng.choice(candidates))
    return EvaluabilityProfile(
        tuple(f"a{i + 1}" for i in range(n_alts)),
        tuple(f"v{i + 1}" for i in range(n_inds)),
        tuple(masks),
    )


def all_profiles_masks(n_alts: int, n_inds: int):
    """Every labeled assignment of admissible evaluable-set masks."""
    candidates = [m for m in range(1 << n_alts) if bin(m).count("1") >= 2]
    return itertools.product(candidates, repeat=n_inds)


def distinct_clique_families(n_alts: int, max_size: int):
    """Every set of up to ``max_size`` distinct admissible masks.

    Both cycle-cover deciders depend only on the set of distinct evaluable
    sets, so agreement on these families is agreement on all labeled profiles
    with that many individuals.
    """
    candidates = [m for m in range(1 << n_alts) if bin(m).count("1") >= 2]
    for size in range(1, max_size + 1):
        yield from itertools.combinations(candidates, size)


def profile_from_masks(n_alts: int, masks: tuple[int, ...]) -> EvaluabilityProfile:
    padded = tuple(masks) + (masks[-1],) * max(0, 3 - len(masks))
    return EvaluabilityProfile(
        tuple(f"a{i + 1}" for i in range(n_alts)),
        tuple(f"v{i + 1}" for i in range(len(padded))),
        padded,
    )
