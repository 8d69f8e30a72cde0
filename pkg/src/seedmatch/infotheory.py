"""Entropies, mutual information, and the joint-typicality predicate.

All quantities are in bits (base-2 logarithms). Typicality is the strong,
type-based flavor: the empirical joint type of two binary sequences must
lie within total (L1) distance epsilon of the target distribution, and any
cell the target assigns probability exactly zero must be empirically empty.
The zero-cell rule is what makes perfectly correlated joints behave: one
disagreeing coordinate disqualifies a pair no matter how large epsilon is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import JointEdgeDistribution
from .errors import InfeasibleJointError, ValidationError

# Absolute slack on typicality comparisons so count/length arithmetic at the
# epsilon boundary is not decided by float rounding.
_FLOAT_SLACK = 1e-12


def binary_entropy(p: float) -> float:
    """H_b(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p={p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def renyi2_entropy(p: float) -> float:
    """Order-2 Renyi entropy of a Bernoulli(p): log2(1 / (p^2 + (1-p)^2))."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p={p} outside [0, 1]")
    return math.log2(1.0 / (p * p + (1.0 - p) * (1.0 - p)))


def mutual_information(joint: JointEdgeDistribution) -> float:
    """I(X1; X2) in bits; zero-probability cells contribute nothing."""
    p1, p2 = joint.p1, joint.p2
    marg = ((1 - p1) * (1 - p2), (1 - p1) * p2, p1 * (1 - p2), p1 * p2)
    total = 0.0
    for p, q in zip(joint.as_tuple(), marg):
        if p > 0.0:
            total += p * math.log2(p / q)
    return max(total, 0.0)


@dataclass(frozen=True)
class JointType:
    """Empirical cell frequencies of a pair of equal-length binary sequences."""

    f00: float
    f01: float
    f10: float
    f11: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.f00, self.f01, self.f10, self.f11)

    def total_distance(self, joint: JointEdgeDistribution) -> float:
        """L1 distance between this type and the target cell probabilities."""
        return sum(abs(f - p) for f, p in zip(self.as_tuple(), joint.as_tuple()))


def _as_bits(s, name: str) -> np.ndarray:
    arr = np.asarray(s)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if arr.dtype != bool and not np.isin(arr, (0, 1)).all():
        raise ValidationError(f"{name} must be a binary sequence")
    return arr.astype(bool)


def empirical_joint_type(s1, s2) -> JointType:
    """Cell counts of (s1[i], s2[i]) divided by the common length."""
    a = _as_bits(s1, "s1")
    b = _as_bits(s2, "s2")
    if len(a) != len(b):
        raise ValidationError(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise ValidationError("sequences must be nonempty")
    n = len(a)
    n11 = int(np.count_nonzero(a & b))
    n10 = int(np.count_nonzero(a & ~b))
    n01 = int(np.count_nonzero(~a & b))
    n00 = n - n11 - n10 - n01
    return JointType(n00 / n, n01 / n, n10 / n, n11 / n)


def is_jointly_typical(s1, s2, joint: JointEdgeDistribution, epsilon: float) -> bool:
    """Strong typicality of the pair with respect to the joint distribution.

    True iff the L1 distance between the empirical joint type and the target
    cells is at most epsilon AND every zero-probability cell is empirically
    empty.
    """
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    t = empirical_joint_type(s1, s2)
    for f, p in zip(t.as_tuple(), joint.as_tuple()):
        if p == 0.0 and f > 0.0:
            return False
    return t.total_distance(joint) <= epsilon + _FLOAT_SLACK


def default_epsilon(lam: int) -> float:
    """Seed-size-driven tolerance: lam ** (-1/3)."""
    if lam < 1:
        raise ValidationError(f"need a positive seed count, got {lam}")
    return float(lam) ** (-1.0 / 3.0)


def tms_seed_threshold(n: int, joint: JointEdgeDistribution) -> float:
    """Predicted seed count above which seeded matching succeeds: 2 log2 n / I."""
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    info = mutual_information(joint)
    if info <= 0.0:
        raise InfeasibleJointError(
            "joint distribution has zero mutual information; no seed count suffices"
        )
    return 2.0 * math.log2(n) / info


def mda_regime_advisory(n: int, p: float) -> bool:
    """Naive check that p sits inside the asymptotic degree-anchoring regime.

    Evaluates log2(n)/n**(1/5) < p < 1 - log2(n)/n**(1/5). The bound carries
    no constants and is vacuous for any practical n (the threshold exceeds
    1 even at n = 10**6), so this is advisory only and never gates a run.
    """
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    margin = math.log2(n) / n ** 0.2
    return margin < p < 1.0 - margin
