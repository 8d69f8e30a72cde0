"""Seeded matching and isomorphism recovery for correlated Erdos-Renyi pairs.

The package provides the generative model for correlated graph pairs, a
degree-anchored exact-signature isomorphism algorithm, a seed-driven
typicality matcher, information-theoretic threshold predictions, brute
force oracles for small instances, and a reproducible Monte Carlo harness.
"""

from .ensemble import (
    CorrelatedPair,
    JointEdgeDistribution,
    SeedSet,
    sample_cer,
    sample_er,
    select_seeds,
    validate_joint,
)
from .errors import (
    EmptySeedsError,
    InfeasibleJointError,
    NotBracketedError,
    ValidationError,
)
from .graphs import (
    Graph,
    GraphBuilder,
    Labeling,
    PartialLabeling,
    apply_permutation,
    degree_sequence_desc,
    read_edgelist,
    write_edgelist,
)
from .infotheory import (
    JointType,
    binary_entropy,
    default_epsilon,
    empirical_joint_type,
    is_jointly_typical,
    mda_regime_advisory,
    mutual_information,
    renyi2_entropy,
    tms_seed_threshold,
)
from .mda import (
    AnchorList,
    MdaResult,
    match_anchors,
    run_mda,
    signature,
    unique_degree_prefix,
    verify_isomorphism,
)
from .oracle import (
    IsoSet,
    exhaustive_isomorphisms,
    exhaustive_map_matching,
    pair_log_likelihood,
)
from .tms import TmsConfig, TmsReport, match_pair, run_tms, seed_signatures, tms_round

__version__ = "0.1.0"

__all__ = [
    "AnchorList",
    "CorrelatedPair",
    "EmptySeedsError",
    "Graph",
    "GraphBuilder",
    "InfeasibleJointError",
    "IsoSet",
    "JointEdgeDistribution",
    "JointType",
    "Labeling",
    "MdaResult",
    "NotBracketedError",
    "PartialLabeling",
    "SeedSet",
    "TmsConfig",
    "TmsReport",
    "ValidationError",
    "apply_permutation",
    "binary_entropy",
    "default_epsilon",
    "degree_sequence_desc",
    "empirical_joint_type",
    "exhaustive_isomorphisms",
    "exhaustive_map_matching",
    "is_jointly_typical",
    "match_anchors",
    "match_pair",
    "mda_regime_advisory",
    "mutual_information",
    "pair_log_likelihood",
    "read_edgelist",
    "renyi2_entropy",
    "run_mda",
    "run_tms",
    "sample_cer",
    "sample_er",
    "seed_signatures",
    "select_seeds",
    "signature",
    "tms_round",
    "tms_seed_threshold",
    "unique_degree_prefix",
    "validate_joint",
    "verify_isomorphism",
    "write_edgelist",
]
