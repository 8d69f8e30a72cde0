"""Command-line surface.

Subcommands: gen (sample a correlated pair to files), iso (degree-anchored
isomorphism recovery), seeded (typicality matching with a seeds file),
sweep (Monte Carlo experiments, including named presets), info (information
quantities of a joint), verify-small (cross-check matchers against the
brute-force oracle).

Exit codes: 0 success, 2 validation error, 3 experiment assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .ensemble import (
    JointEdgeDistribution,
    SeedSet,
    sample_cer,
    select_seeds,
)
from .errors import NotBracketedError, ValidationError
from .graphs import Labeling, read_edgelist, write_edgelist
from .infotheory import (
    binary_entropy,
    mutual_information,
    renyi2_entropy,
    tms_seed_threshold,
)
from .mda import run_mda
from .oracle import exhaustive_isomorphisms
from .rng import child_rng, make_rng
from .tms import TmsConfig, run_tms

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ASSERTION = 3


def _load_joint(source: str) -> JointEdgeDistribution:
    """Parse a joint given inline as JSON or as a path to a JSON file."""
    text = source
    if not source.lstrip().startswith("{"):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"joint config is not valid JSON: {exc}") from exc
    return JointEdgeDistribution.from_json_obj(obj)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cmd_gen(args) -> int:
    joint = _load_joint(args.joint)
    rng = make_rng(args.seed)
    pair = sample_cer(args.n, joint, rng)
    write_edgelist(pair.g1, f"{args.out}.g1.edges")
    write_edgelist(pair.g2, f"{args.out}.g2.edges")
    with open(f"{args.out}.truth", "w", encoding="utf-8") as fh:
        for v in range(pair.n):
            fh.write(f"{v} {pair.truth_sigma2.label_of(v)}\n")
    if args.seeds > 0:
        seeds = select_seeds(pair, args.seeds, rng)
        with open(f"{args.out}.seeds", "w", encoding="utf-8") as fh:
            for v2, v1 in seeds.pairs:
                fh.write(f"{v2} {v1}\n")
    return EXIT_OK


def _cmd_iso(args) -> int:
    g1 = read_edgelist(args.g1)
    g2 = read_edgelist(args.g2)
    result = run_mda(g1, Labeling.identity(g1.n), g2, max_rounds=args.max_rounds)
    obj = {
        "status": "ok" if result.ok else "failed",
        "d_u": result.d_u,
        "anchor_count": result.anchor_count,
        "rounds": result.rounds,
    }
    if result.ok:
        obj["labeling"] = list(result.labeling.labels)
    else:
        obj["failure_stage"] = result.failure_stage
        obj["failure_detail"] = result.failure_detail
    _emit(_json_dump(obj), args.out)
    return EXIT_OK


def _read_seeds(path: str) -> SeedSet:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ValidationError(f"bad seeds line: {line.rstrip()}")
            pairs.append((int(parts[0]), int(parts[1])))
    return SeedSet(tuple(pairs))


def _cmd_seeded(args) -> int:
    g1 = read_edgelist(args.g1)
    g2 = read_edgelist(args.g2)
    seeds = _read_seeds(args.seeds)
    joint = _load_joint(args.joint)
    cfg = TmsConfig(
        epsilon=args.epsilon,
        recompute_epsilon=args.recompute_epsilon,
        max_rounds=args.max_rounds,
        candidate_scope=args.scope,
    )
    report = run_tms(g1, g2, seeds, joint, config=cfg)
    obj = {
        "assignment": list(report.assignment.labels),
        "ambiguity": list(report.ambiguity),
        "rounds_used": report.rounds_used,
        "per_round_ambiguity_sizes": list(report.per_round_ambiguity_sizes),
        "per_round_epsilons": list(report.per_round_epsilons),
        "complete": report.assignment.is_complete(),
        "warnings": list(report.warnings),
    }
    _emit(_json_dump(obj), args.out)
    return EXIT_OK


def _cmd_info(args) -> int:
    joint = _load_joint(args.joint)
    info = mutual_information(joint)
    obj = {
        "p1": joint.p1,
        "p2": joint.p2,
        "binary_entropy_p1": binary_entropy(joint.p1),
        "binary_entropy_p2": binary_entropy(joint.p2),
        "renyi2_entropy_p1": renyi2_entropy(joint.p1),
        "renyi2_entropy_p2": renyi2_entropy(joint.p2),
        "mutual_information": info,
    }
    if args.n is not None:
        obj["n"] = args.n
        obj["seed_threshold"] = (
            tms_seed_threshold(args.n, joint) if info > 0.0 else None
        )
    _emit(_json_dump(obj), args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if (args.preset is None) == (args.config is None):
        raise ValidationError("pass exactly one of --preset or --config")
    if args.preset is not None:
        kind, cfg = harness.preset_config(args.preset, seed=args.seed, workers=args.workers)
    else:
        with open(args.config, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        cfg = harness.ExperimentConfig.from_json_obj(obj)
        if args.seed is not None:
            cfg = harness.with_seed(cfg, args.seed)
        if args.workers != 1:
            from dataclasses import replace

            cfg = replace(cfg, workers=args.workers)
        kind = harness.PRESET_KIND_SWEEP

    if kind == harness.PRESET_KIND_SWEEP:
        result = harness.run_trials(cfg)
        payload = result.to_csv() if args.format == "csv" else _json_dump(result.to_json_obj())
        _emit(payload, args.out)
        return EXIT_OK
    if kind == harness.PRESET_KIND_AMBIGUITY:
        res = harness.check_ambiguity_bound(cfg)
        payload = res.to_csv() if args.format == "csv" else _json_dump(res.to_json_obj())
        _emit(payload, args.out)
        return EXIT_OK
    res = harness.check_du_growth(cfg)
    payload = res.to_csv() if args.format == "csv" else _json_dump(res.to_json_obj())
    _emit(payload, args.out)
    return EXIT_OK if res.monotone else EXIT_ASSERTION


def _cmd_verify_small(args) -> int:
    """Random small instances: matcher output must sit inside the oracle's."""
    joint = JointEdgeDistribution.identical(0.5)
    violations = 0
    checked = 0
    for t in range(args.trials):
        rng = child_rng(args.seed, t)
        n = int(rng.integers(2, args.max_n + 1))
        pair = sample_cer(n, joint, rng)
        result = run_mda(pair.g1, pair.sigma1, pair.g2)
        iso = exhaustive_isomorphisms(pair.g1, pair.g2)
        checked += 1
        if result.ok:
            mapping = tuple(int(lab) - 1 for lab in result.labeling.labels)
            if mapping not in iso:
                violations += 1
        elif result.failure_stage == "NotIsomorphic" and len(iso) > 0:
            violations += 1
    obj = {"trials": checked, "violations": violations}
    _emit(_json_dump(obj), args.out)
    return EXIT_OK if violations == 0 else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seedmatch",
        description="Seeded matching and isomorphism recovery for correlated graph pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a correlated pair to edge-list files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--joint", required=True, help="joint JSON (inline or file path)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=0, help="also emit this many seed pairs")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("iso", help="recover a labeling for an unlabeled copy")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("seeded", help="typicality matching with a seeds file")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("seeds", help="file of 'g2_vertex g1_vertex' lines")
    p.add_argument("--joint", required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--recompute-epsilon", action="store_true")
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--scope", choices=["unmatched", "all"], default="unmatched")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_seeded)

    p = sub.add_parser("sweep", help="Monte Carlo sweeps and statistical checks")
    p.add_argument("--preset", choices=harness.preset_names(), default=None)
    p.add_argument("--config", default=None, help="experiment config JSON file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("info", help="entropies, mutual information, seed threshold")
    p.add_argument("--joint", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("verify-small", help="cross-check the matcher against the oracle")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify_small)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, NotBracketedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
