"""Typicality matching: seed-signature alignment of correlated graph pairs.

Each unmatched vertex of the second graph carries a binary signature of its
adjacencies to the seed vertices; candidates on the first side carry the
mirror signature against the reverse seed set. A vertex is matched when
exactly one candidate's signature pair is jointly epsilon-typical for the
edge distribution; everything else lands in the ambiguity set and is retried
after the matched vertices have been appended to the seeds. Wrong matches
are never retracted.

The per-round scan is one boolean matrix product: with c1, c2 the signature
weights and C11 the co-occurrence counts, the four type cells of every
candidate/subject pair follow from (C11, c1 - C11, c2 - C11, L - ...), so
typicality for all pairs costs a single (candidates x L) @ (L x subjects)
multiply.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensemble import JointEdgeDistribution, SeedSet
from .errors import EmptySeedsError, ValidationError
from .graphs import Graph, Labeling, PartialLabeling, UNASSIGNED
from .infotheory import _FLOAT_SLACK, default_epsilon, mutual_information

SCOPE_UNMATCHED = "unmatched"
SCOPE_ALL = "all"


@dataclass(frozen=True)
class TmsConfig:
    """Knobs for a matching run.

    epsilon: fixed typicality tolerance; None derives lam ** (-1/3) from the
        seed count (held at the initial count unless recompute_epsilon).
    recompute_epsilon: re-derive epsilon from the grown seed count each
        round instead of freezing it at the initial one.
    max_rounds: iteration cap; None runs until no round adds a match.
    candidate_scope: "unmatched" restricts candidates to first-graph
        vertices not already matched or seeded; "all" scans every vertex.
    require_mutual: additionally require the chosen candidate to be typical
        for no other subject in the round.
    """

    epsilon: float | None = None
    recompute_epsilon: bool = False
    max_rounds: int | None = None
    candidate_scope: str = SCOPE_UNMATCHED
    require_mutual: bool = False

    def __post_init__(self):
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValidationError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.candidate_scope not in (SCOPE_UNMATCHED, SCOPE_ALL):
            raise ValidationError(f"unknown candidate scope {self.candidate_scope!r}")

    def epsilon_for(self, lam: int) -> float:
        return self.epsilon if self.epsilon is not None else default_epsilon(lam)


@dataclass(frozen=True)
class TmsReport:
    """Result of a seeded matching run."""

    assignment: PartialLabeling
    ambiguity: tuple[int, ...]
    rounds_used: int
    per_round_ambiguity_sizes: tuple[int, ...]
    per_round_epsilons: tuple[float, ...]
    success: bool | None
    correct_count: int | None
    warnings: tuple[str, ...] = field(default=())

    @property
    def first_round_ambiguity(self) -> int:
        return self.per_round_ambiguity_sizes[0] if self.per_round_ambiguity_sizes else 0


def seed_signatures(g: Graph, seed_vertices) -> np.ndarray:
    """(n, lam) boolean matrix: row v, bit l = adjacency of v to the l-th seed."""
    seeds = [int(v) for v in seed_vertices]
    if len(set(seeds)) != len(seeds):
        raise ValidationError("seed vertices must be distinct")
    for v in seeds:
        if not 0 <= v < g.n:
            raise ValidationError(f"seed vertex {v} out of range for n={g.n}")
    return g.adjacency[:, seeds].copy()


def _typicality_matrix(
    sig1: np.ndarray,
    sig2: np.ndarray,
    joint: JointEdgeDistribution,
    epsilon: float,
) -> np.ndarray:
    """Boolean (candidates, subjects) matrix of jointly typical signature pairs."""
    lam = sig1.shape[1]
    s1 = sig1.astype(np.float32)
    s2 = sig2.astype(np.float32)
    n11 = s1 @ s2.T  # exact: integer-valued counts below 2**24
    c1 = s1.sum(axis=1, dtype=np.float64)[:, None]
    c2 = s2.sum(axis=1, dtype=np.float64)[None, :]
    n11 = n11.astype(np.float64)
    n10 = c1 - n11
    n01 = c2 - n11
    n00 = lam - n11 - n10 - n01
    p00, p01, p10, p11 = joint.as_tuple()
    dist = (
        np.abs(n00 / lam - p00)
        + np.abs(n01 / lam - p01)
        + np.abs(n10 / lam - p10)
        + np.abs(n11 / lam - p11)
    )
    typical = dist <= epsilon + _FLOAT_SLACK
    for counts, p in ((n00, p00), (n01, p01), (n10, p10), (n11, p11)):
        if p == 0.0:
            typical &= counts == 0
    return typical


def tms_round(
    g1: Graph,
    g2: Graph,
    seeds: SeedSet,
    joint: JointEdgeDistribution,
    epsilon: float,
    candidate_scope: str = SCOPE_UNMATCHED,
    require_mutual: bool = False,
) -> tuple[list[tuple[int, int]], list[int]]:
    """One matching pass over every unseeded second-graph vertex.

    Returns (new matches as (g2 vertex, g1 vertex) pairs, ambiguity set).
    A subject is matched iff exactly one candidate signature pair is
    typical; subjects whose unique candidates collide are all deferred.
    """
    if seeds.size == 0:
        raise EmptySeedsError("typicality matching needs at least one seed")
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    n = g1.n
    seeds2 = seeds.g2_vertices()
    seeds1 = seeds.g1_vertices()
    for v2, v1 in seeds.pairs:
        if not (0 <= v2 < n and 0 <= v1 < n):
            raise ValidationError(f"seed pair ({v2}, {v1}) out of range for n={n}")
    subjects = np.array(sorted(set(range(n)) - set(seeds2)), dtype=np.int64)
    if candidate_scope == SCOPE_UNMATCHED:
        candidates = np.array(sorted(set(range(n)) - set(seeds1)), dtype=np.int64)
    else:
        candidates = np.arange(n, dtype=np.int64)
    if len(subjects) == 0:
        return [], []

    sig1 = g1.adjacency[np.ix_(candidates, seeds1)]
    sig2 = g2.adjacency[np.ix_(subjects, seeds2)]
    typical = _typicality_matrix(sig1, sig2, joint, epsilon)

    n_typical = typical.sum(axis=0)
    unique_cols = np.flatnonzero(n_typical == 1)
    chosen_rows = typical[:, unique_cols].argmax(axis=0)
    if require_mutual:
        row_counts = typical.sum(axis=1)
        keep = row_counts[chosen_rows] == 1
        unique_cols = unique_cols[keep]
        chosen_rows = chosen_rows[keep]

    # two subjects claiming one candidate defer both
    claimed, claim_counts = np.unique(chosen_rows, return_counts=True)
    sole = set(claimed[claim_counts == 1].tolist())
    matches = [
        (int(subjects[c]), int(candidates[r]))
        for c, r in zip(unique_cols, chosen_rows)
        if int(r) in sole
    ]
    matched_subjects = {m[0] for m in matches}
    ambiguity = [int(v) for v in subjects if int(v) not in matched_subjects]
    return matches, ambiguity


def run_tms(
    g1: Graph,
    g2: Graph,
    seeds: SeedSet,
    joint: JointEdgeDistribution,
    config: TmsConfig | None = None,
    ground_truth: Labeling | None = None,
    sigma1: Labeling | None = None,
) -> TmsReport:
    """Iterated typicality matching with seed expansion.

    Each round's matches are appended to the seed list (signatures grow)
    and the loop repeats until a round adds nothing or max_rounds is hit.
    When ground truth is supplied, success means every vertex got its true
    label; matching is never judged by the matcher's own claims.
    """
    cfg = config or TmsConfig()
    if g1.n != g2.n:
        raise ValidationError(f"graph orders differ: {g1.n} vs {g2.n}")
    if seeds.size == 0:
        raise EmptySeedsError("typicality matching needs at least one seed")
    n = g1.n
    sigma1 = sigma1 or Labeling.identity(n)

    warnings = []
    if mutual_information(joint) <= 0.0:
        warnings.append("joint distribution carries zero mutual information")

    current = seeds
    rounds_used = 0
    ambiguity_sizes: list[int] = []
    epsilons: list[float] = []
    frozen_epsilon = cfg.epsilon_for(seeds.size)

    while cfg.max_rounds is None or rounds_used < cfg.max_rounds:
        if current.size == n:
            break
        eps = (
            cfg.epsilon_for(current.size) if cfg.recompute_epsilon else frozen_epsilon
        )
        matches, ambiguity = tms_round(
            g1, g2, current, joint, eps,
            candidate_scope=cfg.candidate_scope,
            require_mutual=cfg.require_mutual,
        )
        rounds_used += 1
        epsilons.append(eps)
        ambiguity_sizes.append(len(ambiguity))
        if not matches:
            break
        # deterministic, relabeling-invariant expansion order
        matches.sort(key=lambda m: m[1])
        current = current.extended(matches)

    labels = [UNASSIGNED] * n
    for v2, v1 in current.pairs:
        labels[v2] = sigma1.label_of(v1)
    assignment = PartialLabeling(tuple(labels))
    ambiguity_set = tuple(sorted(set(range(n)) - {p[0] for p in current.pairs}))

    success = None
    correct = None
    if ground_truth is not None:
        correct = sum(
            1 for v in range(n) if assignment.labels[v] == ground_truth.labels[v]
        )
        success = len(ambiguity_set) == 0 and correct == n

    return TmsReport(
        assignment=assignment,
        ambiguity=ambiguity_set,
        rounds_used=rounds_used,
        per_round_ambiguity_sizes=tuple(ambiguity_sizes),
        per_round_epsilons=tuple(epsilons),
        success=success,
        correct_count=correct,
        warnings=tuple(warnings),
    )


def match_pair(pair, seeds: SeedSet, config: TmsConfig | None = None) -> TmsReport:
    """Run matching on a sampled pair, judging success against its hidden truth."""
    return run_tms(
        pair.g1,
        pair.g2,
        seeds,
        pair.joint,
        config=config,
        ground_truth=pair.truth_sigma2,
        sigma1=pair.sigma1,
    )
