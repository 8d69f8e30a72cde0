"""Correlated Erdos-Renyi pair sampling and seed selection.

A pair is generated by drawing one (x1, x2) outcome per unordered vertex
pair from the joint edge distribution, building the first graph from the
x1 bits and an aligned intermediate from the x2 bits, then hiding the
second graph's labeling behind a uniformly random permutation. Cross
(non-aligned) pairs are independent by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Graph, Labeling

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class JointEdgeDistribution:
    """Probability mass on {0,1}^2 for an aligned edge-indicator pair.

    Cell pab is P(X1 = a, X2 = b) where X1 governs the first graph's edge
    and X2 the second graph's.
    """

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        cells = self.as_tuple()
        for name, p in zip(("p00", "p01", "p10", "p11"), cells):
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name}={p} outside [0, 1]")
        total = sum(cells)
        if abs(total - 1.0) > _NORM_TOL:
            raise ValidationError(f"cell probabilities sum to {total!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p00, self.p01, self.p10, self.p11)

    @property
    def p1(self) -> float:
        """Marginal edge density of the first graph."""
        return self.p10 + self.p11

    @property
    def p2(self) -> float:
        """Marginal edge density of the second graph."""
        return self.p01 + self.p11

    @classmethod
    def independent(cls, p1: float, p2: float) -> "JointEdgeDistribution":
        _check_prob("p1", p1)
        _check_prob("p2", p2)
        return cls((1 - p1) * (1 - p2), (1 - p1) * p2, p1 * (1 - p2), p1 * p2)

    @classmethod
    def identical(cls, p: float) -> "JointEdgeDistribution":
        """X1 = X2 almost surely: the exact-copy (isomorphism) regime."""
        _check_prob("p", p)
        return cls(1 - p, 0.0, 0.0, p)

    @classmethod
    def subsample(cls, p: float, s1: float, s2: float) -> "JointEdgeDistribution":
        """Parent edge w.p. p, kept in graph i with probability s_i independently."""
        _check_prob("p", p)
        _check_prob("s1", s1)
        _check_prob("s2", s2)
        return cls(
            (1 - p) + p * (1 - s1) * (1 - s2),
            p * (1 - s1) * s2,
            p * s1 * (1 - s2),
            p * s1 * s2,
        )

    @classmethod
    def from_json_obj(cls, obj: dict) -> "JointEdgeDistribution":
        """Parse the JSON config forms (raw cells or a named model)."""
        if not isinstance(obj, dict):
            raise ValidationError(f"joint config must be an object, got {type(obj).__name__}")
        if "model" in obj:
            model = obj["model"]
            try:
                if model == "identical":
                    return cls.identical(float(obj["p"]))
                if model == "independent":
                    return cls.independent(float(obj["p1"]), float(obj["p2"]))
                if model == "subsample":
                    return cls.subsample(float(obj["p"]), float(obj["s1"]), float(obj["s2"]))
            except KeyError as exc:
                raise ValidationError(f"missing field {exc} for model {model!r}") from exc
            raise ValidationError(f"unknown joint model {model!r}")
        try:
            return cls(
                float(obj["p00"]), float(obj["p01"]), float(obj["p10"]), float(obj["p11"])
            )
        except KeyError as exc:
            raise ValidationError(f"joint config missing cell {exc}") from exc

    def to_json_obj(self) -> dict:
        return {"p00": self.p00, "p01": self.p01, "p10": self.p10, "p11": self.p11}


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"{name}={p} outside [0, 1]")


def validate_joint(p00: float, p01: float, p10: float, p11: float) -> JointEdgeDistribution:
    """Validate four cell probabilities into a distribution (raises otherwise)."""
    return JointEdgeDistribution(p00, p01, p10, p11)


@dataclass(frozen=True)
class CorrelatedPair:
    """A labeled first graph, an unlabeled second graph, and the hidden truth."""

    g1: Graph
    sigma1: Labeling
    g2: Graph
    truth_sigma2: Labeling
    joint: JointEdgeDistribution

    def __post_init__(self):
        if not (self.g1.n == self.g2.n == self.sigma1.n == self.truth_sigma2.n):
            raise ValidationError("graphs and labelings must share the same order")

    @property
    def n(self) -> int:
        return self.g1.n

    def true_partners(self) -> np.ndarray:
        """Per-g2-vertex array of the g1 vertex carrying the same label."""
        by_label = self.sigma1.as_permutation()
        labels2 = np.asarray(self.truth_sigma2.labels, dtype=np.int64)
        return by_label[labels2 - 1]

    def true_partner(self, g2_vertex: int) -> int:
        """The g1 vertex carrying the same ground-truth label."""
        return int(self.true_partners()[g2_vertex])

    def aligned_g2(self) -> Graph:
        """Undo the hidden permutation: vertex u aligns with g1 vertex u."""
        order = np.argsort(self.true_partners())
        return Graph.from_adjacency(self.g2.adjacency[np.ix_(order, order)])


@dataclass(frozen=True)
class SeedSet:
    """Ordered (g2 vertex, g1 vertex) pairs revealed to the matcher."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        g2s = [p[0] for p in self.pairs]
        g1s = [p[1] for p in self.pairs]
        if len(set(g2s)) != len(g2s):
            raise ValidationError("seed g2 vertices must be distinct")
        if len(set(g1s)) != len(g1s):
            raise ValidationError("seed g1 vertices must be distinct")

    @property
    def size(self) -> int:
        return len(self.pairs)

    def g2_vertices(self) -> list[int]:
        return [p[0] for p in self.pairs]

    def g1_vertices(self) -> list[int]:
        """The reverse seed set, index-aligned with the g2 side."""
        return [p[1] for p in self.pairs]

    def extended(self, new_pairs) -> "SeedSet":
        return SeedSet(self.pairs + tuple(new_pairs))


def sample_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """One Erdos-Renyi graph G(n, p)."""
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    _check_prob("p", p)
    iu = np.triu_indices(n, 1)
    bits = rng.random(len(iu[0])) < p
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[0][bits], iu[1][bits]] = True
    adj |= adj.T
    return Graph._wrap(adj)


def sample_cer(n: int, joint: JointEdgeDistribution, rng: np.random.Generator) -> CorrelatedPair:
    """Sample a correlated pair with the second labeling hidden.

    The first labeling is fixed to the identity (no generality lost: the
    model is invariant to composing both labelings with one permutation),
    and the hidden labeling is uniform over all n! permutations.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    iu = np.triu_indices(n, 1)
    m = len(iu[0])
    # codes 0..3 = (0,0), (0,1), (1,0), (1,1) per the cell ordering
    cdf = np.cumsum(joint.as_tuple())
    cdf[-1] = 1.0
    codes = np.searchsorted(cdf, rng.random(m), side="right")

    adj1 = np.zeros((n, n), dtype=bool)
    x1 = codes >= 2
    adj1[iu[0][x1], iu[1][x1]] = True
    adj1 |= adj1.T

    aligned2 = np.zeros((n, n), dtype=bool)
    x2 = (codes == 1) | (codes == 3)
    aligned2[iu[0][x2], iu[1][x2]] = True
    aligned2 |= aligned2.T

    # pos[u] = g2 vertex hosting aligned vertex u; sigma2(pos[u]) = u + 1
    pos = rng.permutation(n)
    inv = np.argsort(pos)
    adj2 = aligned2[np.ix_(inv, inv)]

    return CorrelatedPair(
        g1=Graph._wrap(adj1),
        sigma1=Labeling.identity(n),
        g2=Graph._wrap(adj2.copy()),
        truth_sigma2=Labeling(tuple(int(u) + 1 for u in inv)),
        joint=joint,
    )


def select_seeds(pair: CorrelatedPair, lam: int, rng: np.random.Generator) -> SeedSet:
    """Choose lam seed vertices of g2 uniformly without replacement."""
    n = pair.n
    if not 0 <= lam <= n:
        raise ValidationError(f"seed size {lam} outside [0, {n}]")
    chosen = rng.choice(n, size=lam, replace=False)
    partners = pair.true_partners()
    return SeedSet(tuple((int(w), int(partners[w])) for w in chosen))
