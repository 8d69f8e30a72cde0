"""Degree-anchored exact-signature isomorphism recovery.

Vertices whose degree value occurs exactly once in both graphs are matched
directly (anchors). Every other vertex gets a binary signature recording
its adjacency to the anchors, and is matched to the unique vertex of equal
degree and identical signature on the other side. Newly matched vertices
join the anchor list and the signature step repeats until a fixed point,
which is what makes the method effective at practical graph sizes where
only a handful of degrees are unique. A returned labeling is always
verified edge-for-edge, so there are no false positives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Graph, Labeling, degree_sequence_desc

STAGE_INSUFFICIENT_ANCHORS = "InsufficientAnchors"
STAGE_NOT_ISOMORPHIC = "NotIsomorphic"
STAGE_NON_UNIQUE_SIGNATURE = "NonUniqueSignature"
STAGE_UNMATCHED_VERTEX = "UnmatchedVertex"
STAGE_VERIFICATION_FAILED = "VerificationFailed"


@dataclass(frozen=True)
class AnchorList:
    """(g1 vertex, g2 vertex, degree) triples in strictly decreasing degree order."""

    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        degs = [t[2] for t in self.triples]
        if any(a <= b for a, b in zip(degs, degs[1:])):
            raise ValidationError("anchor degrees must be strictly decreasing")

    def __len__(self) -> int:
        return len(self.triples)

    def g1_vertices(self) -> list[int]:
        return [t[0] for t in self.triples]

    def g2_vertices(self) -> list[int]:
        return [t[1] for t in self.triples]


class MdaStageError(Exception):
    """Internal control flow carrying the failure stage name."""

    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


@dataclass(frozen=True)
class MdaResult:
    """Outcome of a matching run: a verified labeling or a named failure stage."""

    labeling: Labeling | None
    failure_stage: str | None
    failure_detail: str | None
    d_u: int
    anchor_count: int
    rounds: int

    @property
    def ok(self) -> bool:
        return self.labeling is not None


def unique_degree_prefix(g: Graph) -> int:
    """Number of top distinct degree values that occur exactly once."""
    count = 0
    for _, mult in degree_sequence_desc(g):
        if mult != 1:
            break
        count += 1
    return count


def _unique_degree_values(g: Graph) -> list[int]:
    """All degree values with multiplicity one, descending."""
    return [d for d, mult in degree_sequence_desc(g) if mult == 1]


def match_anchors(g1: Graph, g2: Graph) -> AnchorList:
    """Pair the top unique-degree vertices of both graphs rank by rank.

    Any degree-value mismatch between the graphs surfaces as NotIsomorphic
    through the sequence comparison; a shared prefix of zero means no
    anchors exist (regular graphs land here).
    """
    if degree_sequence_desc(g1) != degree_sequence_desc(g2):
        raise MdaStageError(STAGE_NOT_ISOMORPHIC, "degree sequences differ")
    prefix = unique_degree_prefix(g1)
    if prefix == 0:
        raise MdaStageError(STAGE_INSUFFICIENT_ANCHORS, "no unique top degree")
    deg1 = g1.degrees()
    deg2 = g2.degrees()
    top = sorted(set(deg1.tolist()), reverse=True)[:prefix]
    triples = tuple(
        (int(np.flatnonzero(deg1 == d)[0]), int(np.flatnonzero(deg2 == d)[0]), d)
        for d in top
    )
    return AnchorList(triples)


def signature(g: Graph, v: int, anchors: AnchorList, side: int) -> np.ndarray:
    """Boolean vector: bit l is the adjacency of v to anchor l on the given side.

    ``side`` is 1 or 2 and selects which graph's anchor vertices to use.
    """
    if side not in (1, 2):
        raise ValidationError(f"side must be 1 or 2, got {side}")
    anchor_vertices = anchors.g1_vertices() if side == 1 else anchors.g2_vertices()
    if v in anchor_vertices:
        raise ValidationError(f"vertex {v} is itself an anchor on side {side}")
    return g.adjacency[v, anchor_vertices].copy()


def _anchor_pairs_all_unique(g1: Graph, g2: Graph):
    """Every shared unique-multiplicity degree gives one anchor pair."""
    deg1 = g1.degrees()
    deg2 = g2.degrees()
    pairs = []
    for d in _unique_degree_values(g1):
        v1 = int(np.flatnonzero(deg1 == d)[0])
        v2 = int(np.flatnonzero(deg2 == d)[0])
        pairs.append((v1, v2, d))
    return pairs


def run_mda(
    g1: Graph,
    sigma1: Labeling,
    g2: Graph,
    max_rounds: int | None = None,
) -> MdaResult:
    """Recover the second graph's labeling from a labeled exact copy.

    ``max_rounds`` caps the signature-refinement iterations (1 reproduces the
    single-pass variant); the default runs to a fixed point. Any labeling
    returned has passed full adjacency verification.
    """
    if g1.n != g2.n:
        raise ValidationError(f"graph orders differ: {g1.n} vs {g2.n}")
    if max_rounds is not None and max_rounds < 1:
        raise ValidationError(f"max_rounds must be >= 1, got {max_rounds}")
    d_u = unique_degree_prefix(g1)
    try:
        labeling, anchor_count, rounds = _run_mda_inner(g1, sigma1, g2, max_rounds)
    except MdaStageError as err:
        return MdaResult(None, err.stage, err.detail, d_u, 0, 0)
    return MdaResult(labeling, None, None, d_u, anchor_count, rounds)


def _run_mda_inner(g1: Graph, sigma1: Labeling, g2: Graph, max_rounds: int | None):
    n = g1.n
    if degree_sequence_desc(g1) != degree_sequence_desc(g2):
        raise MdaStageError(STAGE_NOT_ISOMORPHIC, "degree sequences differ")
    anchors = _anchor_pairs_all_unique(g1, g2)
    if not anchors:
        raise MdaStageError(
            STAGE_INSUFFICIENT_ANCHORS, "no degree value has multiplicity one"
        )
    anchor_count = len(anchors)

    deg1 = g1.degrees()
    deg2 = g2.degrees()
    matched = {v2: v1 for v1, v2, _ in anchors}  # g2 vertex -> g1 vertex
    cols1 = [v1 for v1, _, _ in anchors]
    cols2 = [v2 for _, v2, _ in anchors]
    un1 = sorted(set(range(n)) - set(cols1))
    un2 = sorted(set(range(n)) - set(cols2))

    rounds = 0
    saw_collision = False
    while un2:
        if max_rounds is not None and rounds >= max_rounds:
            break
        rounds += 1
        sig1 = g1.adjacency[np.ix_(un1, cols1)]
        sig2 = g2.adjacency[np.ix_(un2, cols2)]
        by_key1: dict[tuple[int, bytes], list[int]] = {}
        by_key2: dict[tuple[int, bytes], list[int]] = {}
        for row, v in enumerate(un1):
            by_key1.setdefault((int(deg1[v]), sig1[row].tobytes()), []).append(v)
        for row, v in enumerate(un2):
            by_key2.setdefault((int(deg2[v]), sig2[row].tobytes()), []).append(v)

        new_pairs = []
        saw_collision = False
        for key, vs2 in by_key2.items():
            vs1 = by_key1.get(key, ())
            if len(vs2) == 1 and len(vs1) == 1:
                new_pairs.append((vs1[0], vs2[0]))
            elif len(vs2) > 1 or len(vs1) > 1:
                saw_collision = True
        for vs1 in by_key1.values():
            if len(vs1) > 1:
                saw_collision = True
        if not new_pairs:
            break
        # anchor order must not depend on g2's vertex numbering
        new_pairs.sort(key=lambda p: p[0])
        for v1, v2 in new_pairs:
            matched[v2] = v1
            cols1.append(v1)
            cols2.append(v2)
        gone1 = {v1 for v1, _ in new_pairs}
        gone2 = {v2 for _, v2 in new_pairs}
        un1 = [v for v in un1 if v not in gone1]
        un2 = [v for v in un2 if v not in gone2]

    if un2:
        if saw_collision:
            raise MdaStageError(
                STAGE_NON_UNIQUE_SIGNATURE,
                f"{len(un2)} vertices left in colliding signature classes",
            )
        raise MdaStageError(
            STAGE_UNMATCHED_VERTEX,
            f"{len(un2)} vertices have no signature counterpart",
        )

    mapping = np.array([matched[v2] for v2 in range(n)], dtype=np.int64)
    # mandatory exact verification: one-sided error only
    if not np.array_equal(g2.adjacency, g1.adjacency[np.ix_(mapping, mapping)]):
        raise MdaStageError(STAGE_VERIFICATION_FAILED, "bijection is not edge-preserving")
    labels = tuple(int(sigma1.label_of(int(w))) for w in mapping)
    return Labeling(labels), anchor_count, rounds


def verify_isomorphism(g1: Graph, sigma1: Labeling, g2: Graph, sigma2: Labeling) -> bool:
    """Check that matching labels define an edge-preserving bijection."""
    if not (g1.n == g2.n == sigma1.n == sigma2.n):
        return False
    by_label = sigma1.as_permutation()
    labels2 = np.asarray(sigma2.labels, dtype=np.int64)
    mapping = by_label[labels2 - 1]
    return bool(np.array_equal(g2.adjacency, g1.adjacency[np.ix_(mapping, mapping)]))
