"""Exhaustive ground-truth machinery for small instances.

Used by tests and the verify-small harness mode to cross-check the fast
matchers: exhaustive isomorphism enumeration (with degree pruning) and
exhaustive maximum-likelihood matching under the correlated-pair model.
Hard size guards keep runtimes in CI territory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

from .ensemble import JointEdgeDistribution, SeedSet
from .errors import ValidationError
from .graphs import Graph

MAX_ISO_N = 10
MAX_MAP_N = 8

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class IsoSet:
    """All edge-preserving bijections g2 -> g1, in lexicographic order."""

    bijections: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.bijections)

    def __iter__(self):
        return iter(self.bijections)

    def __contains__(self, mapping) -> bool:
        return tuple(mapping) in set(self.bijections)


def exhaustive_isomorphisms(g1: Graph, g2: Graph) -> IsoSet:
    """Enumerate every bijection g2 -> g1 that preserves adjacency exactly.

    Backtracking over g2 vertices in index order with candidate g1 vertices
    in ascending order, pruning on degree and on adjacency consistency with
    the partial assignment, so results come out lexicographically sorted.
    """
    if g1.n > MAX_ISO_N or g2.n > MAX_ISO_N:
        raise ValidationError(f"exhaustive isomorphism capped at n={MAX_ISO_N}")
    if g1.n != g2.n:
        return IsoSet(())
    n = g1.n
    if sorted(g1.degrees().tolist()) != sorted(g2.degrees().tolist()):
        return IsoSet(())
    deg1 = g1.degrees()
    deg2 = g2.degrees()
    adj1 = g1.adjacency
    adj2 = g2.adjacency

    found: list[tuple[int, ...]] = []
    assigned: list[int] = []
    used = [False] * n

    def extend(v2: int) -> None:
        if v2 == n:
            found.append(tuple(assigned))
            return
        for v1 in range(n):
            if used[v1] or deg1[v1] != deg2[v2]:
                continue
            ok = True
            for prev2, prev1 in enumerate(assigned):
                if adj2[v2, prev2] != adj1[v1, prev1]:
                    ok = False
                    break
            if not ok:
                continue
            used[v1] = True
            assigned.append(v1)
            extend(v2 + 1)
            assigned.pop()
            used[v1] = False

    extend(0)
    return IsoSet(tuple(found))


def pair_log_likelihood(
    g1: Graph,
    g2: Graph,
    bijection,
    joint: JointEdgeDistribution,
) -> float:
    """Log2-probability of the pair under an alignment of g2 onto g1.

    Sums log2 P(x1 = g1 edge on mapped endpoints, x2 = g2 edge) over all
    unordered vertex pairs; zero-probability cells yield -inf.
    """
    n = g2.n
    mapping = [int(b) for b in bijection]
    if sorted(mapping) != list(range(g1.n)) or g1.n != n:
        raise ValidationError("bijection must map g2 vertices onto g1 vertices")
    cells = joint.as_tuple()
    logs = [math.log2(p) if p > 0.0 else _NEG_INF for p in cells]
    adj1 = g1.adjacency
    adj2 = g2.adjacency
    total = 0.0
    for u, v in combinations(range(n), 2):
        x1 = int(adj1[mapping[u], mapping[v]])
        x2 = int(adj2[u, v])
        term = logs[2 * x1 + x2]
        if term == _NEG_INF:
            return _NEG_INF
        total += term
    return total


def exhaustive_map_matching(
    g1: Graph,
    g2: Graph,
    joint: JointEdgeDistribution,
    fixed_seeds: SeedSet | None = None,
) -> tuple[tuple[int, ...], float]:
    """Best seed-respecting bijection by likelihood; lexicographic tie-break.

    Returns (bijection array g2 -> g1, its log2-likelihood). Enumeration
    order is lexicographic in the bijection array and ties keep the first
    maximiser, so output is deterministic.
    """
    if g1.n > MAX_MAP_N or g2.n > MAX_MAP_N:
        raise ValidationError(f"exhaustive matching capped at n={MAX_MAP_N}")
    if g1.n != g2.n:
        raise ValidationError(f"graph orders differ: {g1.n} vs {g2.n}")
    n = g1.n
    seeds = fixed_seeds or SeedSet(())
    fixed = {v2: v1 for v2, v1 in seeds.pairs}
    for v2, v1 in fixed.items():
        if not (0 <= v2 < n and 0 <= v1 < n):
            raise ValidationError(f"seed pair ({v2}, {v1}) out of range")
    free2 = [v for v in range(n) if v not in fixed]
    free1 = sorted(set(range(n)) - set(fixed.values()))

    best: tuple[int, ...] | None = None
    best_ll = _NEG_INF
    mapping = [0] * n
    for v2, v1 in fixed.items():
        mapping[v2] = v1
    for perm in permutations(free1):
        for v2, v1 in zip(free2, perm):
            mapping[v2] = v1
        ll = pair_log_likelihood(g1, g2, mapping, joint)
        # summation-order float noise must not break lexicographic ties
        if best is None:
            take = True
        elif best_ll == _NEG_INF:
            take = ll > _NEG_INF
        else:
            take = ll > best_ll + 1e-9 * (1.0 + abs(best_ll))
        if take:
            best = tuple(mapping)
            best_ll = ll
    assert best is not None
    return best, best_ll
