from __future__ import annotations

import math

import numpy as np
import pytest

from seedmatch import (
    JointEdgeDistribution,
    Labeling,
    SeedSet,
    ValidationError,
    apply_permutation,
    sample_cer,
    sample_er,
    select_seeds,
    validate_joint,
)
from seedmatch.rng import child_rng, make_rng


def test_validate_joint_independent_fair():
    j = validate_joint(0.25, 0.25, 0.25, 0.25)
    assert j.p1 == pytest.approx(0.5)
    assert j.p2 == pytest.approx(0.5)


def test_validate_joint_perfectly_correlated():
    j = validate_joint(0.5, 0.0, 0.0, 0.5)
    assert j.p1 == pytest.approx(0.5)
    assert j.p2 == pytest.approx(0.5)
    assert j.p01 == 0.0 and j.p10 == 0.0


def test_validate_joint_rejects_bad_sum():
    with pytest.raises(ValidationError):
        validate_joint(0.6, 0.3, 0.3, 0.0)  # sums to 1.2


def test_validate_joint_rejects_negative():
    with pytest.raises(ValidationError):
        validate_joint(-0.1, 0.5, 0.3, 0.3)


def test_constructors():
    ind = JointEdgeDistribution.independent(0.3, 0.6)
    assert ind.p11 == pytest.approx(0.18)
    assert ind.p10 == pytest.approx(0.12)
    ident = JointEdgeDistribution.identical(0.25)
    assert ident.as_tuple() == (0.75, 0.0, 0.0, 0.25)
    sub = JointEdgeDistribution.subsample(0.8, 0.5, 0.25)
    assert sub.p11 == pytest.approx(0.8 * 0.5 * 0.25)
    assert sub.p10 == pytest.approx(0.8 * 0.5 * 0.75)
    assert sub.p01 == pytest.approx(0.8 * 0.5 * 0.25)
    assert sub.p00 == pytest.approx(1 - 0.8 * (0.5 + 0.25 - 0.125))


def test_from_json_obj_forms():
    raw = JointEdgeDistribution.from_json_obj(
        {"p00": 0.4, "p01": 0.1, "p10": 0.1, "p11": 0.4}
    )
    assert raw.p11 == 0.4
    ident = JointEdgeDistribution.from_json_obj({"model": "identical", "p": 0.5})
    assert ident == JointEdgeDistribution.identical(0.5)
    sub = JointEdgeDistribution.from_json_obj(
        {"model": "subsample", "p": 0.5, "s1": 0.9, "s2": 0.8}
    )
    assert sub == JointEdgeDistribution.subsample(0.5, 0.9, 0.8)
    ind = JointEdgeDistribution.from_json_obj(
        {"model": "independent", "p1": 0.2, "p2": 0.3}
    )
    assert ind == JointEdgeDistribution.independent(0.2, 0.3)
    with pytest.raises(ValidationError):
        JointEdgeDistribution.from_json_obj({"model": "banana"})
    with pytest.raises(ValidationError):
        JointEdgeDistribution.from_json_obj({"p00": 1.0})


def test_sample_cer_all_ones_cell():
    pair = sample_cer(4, JointEdgeDistribution(0.0, 0.0, 0.0, 1.0), make_rng(1))
    assert pair.g1.edge_count() == 6  # complete K4
    assert pair.g2.edge_count() == 6


def test_sample_cer_all_zeros_cell():
    pair = sample_cer(6, JointEdgeDistribution(1.0, 0.0, 0.0, 0.0), make_rng(1))
    assert pair.g1.edge_count() == 0
    assert pair.g2.edge_count() == 0


def _aligned_cell_frequencies(pair):
    """Empirical joint type over aligned vertex pairs (upper triangle)."""
    iu = np.triu_indices(pair.n, 1)
    x1 = pair.g1.adjacency[iu]
    x2 = pair.aligned_g2().adjacency[iu]
    m = len(x1)
    return (
        np.count_nonzero(~x1 & ~x2) / m,
        np.count_nonzero(~x1 & x2) / m,
        np.count_nonzero(x1 & ~x2) / m,
        np.count_nonzero(x1 & x2) / m,
    )


@pytest.mark.parametrize(
    "joint",
    [
        JointEdgeDistribution(0.25, 0.25, 0.25, 0.25),
        JointEdgeDistribution.identical(0.5),
        JointEdgeDistribution(0.4, 0.1, 0.1, 0.4),
    ],
)
def test_sample_cer_empirical_joint_type(joint):
    # Derived check: count the four (x1, x2) outcomes over all C(500, 2)
    # aligned pairs; each cell frequency must land within 0.01 of the target.
    pair = sample_cer(500, joint, make_rng(2024))
    freqs = _aligned_cell_frequencies(pair)
    for f, p in zip(freqs, joint.as_tuple()):
        assert abs(f - p) <= 0.01


def test_sample_cer_marginal_concentration():
    joint = JointEdgeDistribution(0.4, 0.1, 0.1, 0.4)
    n = 400
    m = n * (n - 1) // 2
    sigma = math.sqrt(joint.p1 * (1 - joint.p1) / m)
    for seed in (0, 1, 2):
        pair = sample_cer(n, joint, make_rng(seed))
        density = pair.g1.edge_count() / m
        assert abs(density - joint.p1) <= 3 * sigma


def test_sample_cer_reconstruction():
    # applying the permutation realized by the hidden labeling to the aligned
    # intermediate must reproduce g2 exactly
    joint = JointEdgeDistribution(0.4, 0.1, 0.1, 0.4)
    pair = sample_cer(50, joint, make_rng(5))
    aligned = pair.aligned_g2()
    order = np.argsort(pair.true_partners())  # aligned index -> g2 vertex
    perm = Labeling(tuple(int(w) + 1 for w in order))
    assert apply_permutation(aligned, perm) == pair.g2
    # and the aligned intermediate matches the configured joint statistically
    iu = np.triu_indices(pair.n, 1)
    agree = np.count_nonzero(pair.g1.adjacency[iu] == aligned.adjacency[iu]) / len(iu[0])
    assert agree == pytest.approx(0.8, abs=0.05)


def test_sample_cer_determinism():
    joint = JointEdgeDistribution(0.4, 0.1, 0.1, 0.4)
    a = sample_cer(80, joint, make_rng(99))
    b = sample_cer(80, joint, make_rng(99))
    assert a.g1 == b.g1
    assert a.g2 == b.g2
    assert a.truth_sigma2 == b.truth_sigma2


def test_sample_cer_rejects_zero_vertices():
    with pytest.raises(ValidationError):
        sample_cer(0, JointEdgeDistribution.identical(0.5), make_rng(0))


def test_sample_er_density():
    g = sample_er(300, 0.2, make_rng(3))
    m = 300 * 299 / 2
    assert abs(g.edge_count() / m - 0.2) < 3 * math.sqrt(0.2 * 0.8 / m)
    with pytest.raises(ValidationError):
        sample_er(0, 0.5, make_rng(0))


def test_select_seeds_empty_and_full():
    pair = sample_cer(30, JointEdgeDistribution.identical(0.5), make_rng(4))
    assert select_seeds(pair, 0, make_rng(0)).size == 0
    full = select_seeds(pair, 30, make_rng(0))
    assert full.size == 30
    assert sorted(full.g2_vertices()) == list(range(30))
    for v2, v1 in full.pairs:
        assert pair.true_partner(v2) == v1


def test_select_seeds_label_agreement():
    pair = sample_cer(100, JointEdgeDistribution(0.4, 0.1, 0.1, 0.4), make_rng(6))
    seeds = select_seeds(pair, 10, make_rng(1))
    assert seeds.size == 10
    for v2, v1 in seeds.pairs:
        assert pair.sigma1.label_of(v1) == pair.truth_sigma2.label_of(v2)


def test_select_seeds_rejects_oversize():
    pair = sample_cer(10, JointEdgeDistribution.identical(0.5), make_rng(0))
    with pytest.raises(ValidationError):
        select_seeds(pair, 11, make_rng(0))


def test_seedset_rejects_duplicates():
    with pytest.raises(ValidationError):
        SeedSet(((0, 1), (0, 2)))
    with pytest.raises(ValidationError):
        SeedSet(((0, 1), (2, 1)))
    s = SeedSet(((3, 5), (1, 2)))
    assert s.g2_vertices() == [3, 1]
    assert s.g1_vertices() == [5, 2]
    assert s.extended([(4, 7)]).size == 3


def test_child_rng_independent_of_order():
    a = child_rng(42, 0, 3).random(4)
    b = child_rng(42, 0, 3).random(4)
    c = child_rng(42, 0, 4).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
