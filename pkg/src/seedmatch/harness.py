"""Monte Carlo experiment orchestration and statistical checks.

Every trial derives its own child random stream from (master seed, grid
index, trial index), and aggregation is keyed the same way, so a sweep's
output bytes are identical no matter how many workers execute it. Success
is always judged against the generator's hidden ground truth, never by the
matcher's own report.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .ensemble import JointEdgeDistribution, sample_cer, sample_er, select_seeds
from .errors import NotBracketedError, ValidationError
from .infotheory import tms_seed_threshold
from .mda import run_mda, unique_degree_prefix
from .rng import child_rng
from .tms import TmsConfig, match_pair

ALGORITHM_MDA = "mda"
ALGORITHM_TMS = "tms"

_WILSON_Z = 1.959963984540054  # 95% two-sided normal quantile


def wilson_interval(successes: int, total: int, z: float = _WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        raise ValidationError("wilson interval needs at least one trial")
    if not 0 <= successes <= total:
        raise ValidationError(f"successes {successes} outside [0, {total}]")
    phat = successes / total
    denom = 1.0 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == total else min(1.0, center + half)
    return (lo, hi)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: an algorithm, a graph size, a joint, and a trial budget."""

    algorithm: str
    n: int
    joint: JointEdgeDistribution
    trials: int
    rng_seed: int
    lambda_grid: tuple[int, ...] = ()
    tms: TmsConfig = field(default_factory=TmsConfig)
    workers: int = 1

    def __post_init__(self):
        if self.algorithm not in (ALGORITHM_MDA, ALGORITHM_TMS):
            raise ValidationError(f"unknown algorithm {self.algorithm!r}")
        if self.n < 1:
            raise ValidationError(f"need n >= 1, got {self.n}")
        if self.trials < 1:
            raise ValidationError(f"need trials >= 1, got {self.trials}")
        if self.workers < 1:
            raise ValidationError(f"need workers >= 1, got {self.workers}")
        if self.algorithm == ALGORITHM_TMS:
            if not self.lambda_grid:
                raise ValidationError("tms sweeps need a nonempty lambda grid")
            for lam in self.lambda_grid:
                if not 1 <= lam <= self.n:
                    raise ValidationError(f"seed size {lam} outside [1, {self.n}]")

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentConfig":
        try:
            tms_obj = obj.get("tms", {})
            return cls(
                algorithm=str(obj["algorithm"]),
                n=int(obj["n"]),
                joint=JointEdgeDistribution.from_json_obj(obj["joint"]),
                trials=int(obj["trials"]),
                rng_seed=int(obj["rng_seed"]),
                lambda_grid=tuple(int(x) for x in obj.get("lambda_grid", ())),
                tms=TmsConfig(
                    epsilon=tms_obj.get("epsilon"),
                    recompute_epsilon=bool(tms_obj.get("recompute_epsilon", False)),
                    max_rounds=tms_obj.get("max_rounds"),
                    candidate_scope=tms_obj.get("candidate_scope", "unmatched"),
                    require_mutual=bool(tms_obj.get("require_mutual", False)),
                ),
                workers=int(obj.get("workers", 1)),
            )
        except KeyError as exc:
            raise ValidationError(f"experiment config missing field {exc}") from exc


@dataclass(frozen=True)
class TrialOutcome:
    grid_index: int
    trial_index: int
    success: bool
    rounds: int
    first_ambiguity: int | None
    final_ambiguity: int | None
    per_round_ambiguity: tuple[int, ...] | None
    accuracy: float
    d_u: int | None
    epsilon0: float | None


@dataclass(frozen=True)
class SweepRow:
    """Aggregated statistics for one grid point."""

    algorithm: str
    n: int
    lam: int | None
    trials: int
    successes: int
    wilson_lo: float
    wilson_hi: float
    mean_rounds: float
    mean_first_ambiguity: float | None
    mean_final_ambiguity: float | None
    mean_ambiguity_per_round: tuple[float, ...] | None
    mean_accuracy: float
    mean_d_u: float | None
    predicted_threshold: float | None
    epsilon0: float | None

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials


CSV_HEADER = (
    "algorithm,n,lam,trials,successes,success_rate,wilson_lo,wilson_hi,"
    "mean_rounds,mean_first_ambiguity,mean_final_ambiguity,"
    "mean_ambiguity_per_round,mean_accuracy,mean_d_u,predicted_threshold,"
    "epsilon0"
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, tuple):
        return ";".join(_fmt(v) for v in x)
    return str(x)


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: tuple[SweepRow, ...]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(
                ",".join(
                    _fmt(v)
                    for v in (
                        r.algorithm, r.n, r.lam, r.trials, r.successes,
                        r.success_rate, r.wilson_lo, r.wilson_hi, r.mean_rounds,
                        r.mean_first_ambiguity, r.mean_final_ambiguity,
                        r.mean_ambiguity_per_round, r.mean_accuracy, r.mean_d_u,
                        r.predicted_threshold, r.epsilon0,
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "rows": [
                {
                    "algorithm": r.algorithm,
                    "n": r.n,
                    "lam": r.lam,
                    "trials": r.trials,
                    "successes": r.successes,
                    "success_rate": r.success_rate,
                    "wilson_lo": r.wilson_lo,
                    "wilson_hi": r.wilson_hi,
                    "mean_rounds": r.mean_rounds,
                    "mean_first_ambiguity": r.mean_first_ambiguity,
                    "mean_final_ambiguity": r.mean_final_ambiguity,
                    "mean_ambiguity_per_round": (
                        list(r.mean_ambiguity_per_round)
                        if r.mean_ambiguity_per_round is not None
                        else None
                    ),
                    "mean_accuracy": r.mean_accuracy,
                    "mean_d_u": r.mean_d_u,
                    "predicted_threshold": r.predicted_threshold,
                    "epsilon0": r.epsilon0,
                }
                for r in self.rows
            ]
        }


def _tms_trial(cfg: ExperimentConfig, grid_index: int, trial_index: int) -> TrialOutcome:
    rng = child_rng(cfg.rng_seed, grid_index, trial_index)
    lam = cfg.lambda_grid[grid_index]
    pair = sample_cer(cfg.n, cfg.joint, rng)
    seeds = select_seeds(pair, lam, rng)
    report = match_pair(pair, seeds, cfg.tms)
    return TrialOutcome(
        grid_index=grid_index,
        trial_index=trial_index,
        success=bool(report.success),
        rounds=report.rounds_used,
        first_ambiguity=report.first_round_ambiguity,
        final_ambiguity=len(report.ambiguity),
        per_round_ambiguity=report.per_round_ambiguity_sizes,
        accuracy=(report.correct_count or 0) / cfg.n,
        d_u=None,
        epsilon0=cfg.tms.epsilon_for(lam),
    )


def _mda_trial(cfg: ExperimentConfig, grid_index: int, trial_index: int) -> TrialOutcome:
    rng = child_rng(cfg.rng_seed, grid_index, trial_index)
    pair = sample_cer(cfg.n, cfg.joint, rng)
    result = run_mda(pair.g1, pair.sigma1, pair.g2)
    success = result.ok and result.labeling.labels == pair.truth_sigma2.labels
    return TrialOutcome(
        grid_index=grid_index,
        trial_index=trial_index,
        success=success,
        rounds=result.rounds,
        first_ambiguity=None,
        final_ambiguity=None,
        per_round_ambiguity=None,
        accuracy=1.0 if success else 0.0,
        d_u=result.d_u,
        epsilon0=None,
    )


def _run_one(args) -> TrialOutcome:
    cfg, grid_index, trial_index = args
    if cfg.algorithm == ALGORITHM_TMS:
        return _tms_trial(cfg, grid_index, trial_index)
    return _mda_trial(cfg, grid_index, trial_index)


def run_trials(cfg: ExperimentConfig) -> SweepResult:
    """Run the whole grid; reproducible for a fixed seed at any worker count."""
    grid = cfg.lambda_grid if cfg.algorithm == ALGORITHM_TMS else (None,)
    tasks = [
        (cfg, gi, ti) for gi in range(len(grid)) for ti in range(cfg.trials)
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_one, tasks, chunksize=4))
    else:
        outcomes = [_run_one(t) for t in tasks]
    outcomes.sort(key=lambda o: (o.grid_index, o.trial_index))

    try:
        predicted = tms_seed_threshold(cfg.n, cfg.joint) if cfg.n >= 2 else None
    except ValidationError:
        predicted = None

    rows = []
    for gi, lam in enumerate(grid):
        chunk = [o for o in outcomes if o.grid_index == gi]
        succ = sum(o.success for o in chunk)
        lo, hi = wilson_interval(succ, len(chunk))
        firsts = [o.first_ambiguity for o in chunk if o.first_ambiguity is not None]
        finals = [o.final_ambiguity for o in chunk if o.final_ambiguity is not None]
        dus = [o.d_u for o in chunk if o.d_u is not None]
        per_round = [o.per_round_ambiguity for o in chunk if o.per_round_ambiguity is not None]
        per_round_means = None
        if per_round:
            depth = max(len(p) for p in per_round)
            # round r averaged over the trials that reached it
            per_round_means = tuple(
                sum(p[r] for p in per_round if len(p) > r)
                / max(1, sum(1 for p in per_round if len(p) > r))
                for r in range(depth)
            )
        rows.append(
            SweepRow(
                algorithm=cfg.algorithm,
                n=cfg.n,
                lam=lam,
                trials=len(chunk),
                successes=succ,
                wilson_lo=lo,
                wilson_hi=hi,
                mean_rounds=sum(o.rounds for o in chunk) / len(chunk),
                mean_first_ambiguity=(sum(firsts) / len(firsts)) if firsts else None,
                mean_final_ambiguity=(sum(finals) / len(finals)) if finals else None,
                mean_ambiguity_per_round=per_round_means,
                mean_accuracy=sum(o.accuracy for o in chunk) / len(chunk),
                mean_d_u=(sum(dus) / len(dus)) if dus else None,
                predicted_threshold=predicted,
                epsilon0=chunk[0].epsilon0,
            )
        )
    return SweepResult(config=cfg, rows=tuple(rows))


def estimate_threshold(sweep: SweepResult) -> float:
    """Seed count at which the success rate crosses 50%, by interpolation."""
    rows = sorted((r for r in sweep.rows if r.lam is not None), key=lambda r: r.lam)
    if len(rows) < 2:
        raise NotBracketedError("need at least two grid points")
    for a, b in zip(rows, rows[1:]):
        ra, rb = a.success_rate, b.success_rate
        if ra == 0.5:
            return float(a.lam)
        if ra < 0.5 <= rb:
            return a.lam + (0.5 - ra) * (b.lam - a.lam) / (rb - ra)
    if rows[-1].success_rate == 0.5:
        return float(rows[-1].lam)
    raise NotBracketedError("sweep never straddles 50% success")


@dataclass(frozen=True)
class DegreeGrowthConfig:
    n_grid: tuple[int, ...]
    p: float
    trials: int
    rng_seed: int
    workers: int = 1

    def __post_init__(self):
        if not self.n_grid or any(n < 2 for n in self.n_grid):
            raise ValidationError("need a grid of n >= 2 values")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p={self.p} outside [0, 1]")
        if self.trials < 1:
            raise ValidationError("need trials >= 1")


@dataclass(frozen=True)
class DegreeGrowthResult:
    rows: tuple[tuple[int, float, float], ...]  # (n, median d_u, reference scale)
    monotone: bool

    def to_json_obj(self) -> dict:
        return {
            "rows": [
                {"n": n, "median_d_u": med, "reference": ref}
                for n, med, ref in self.rows
            ],
            "monotone": self.monotone,
        }

    def to_csv(self) -> str:
        lines = ["n,median_d_u,reference"]
        for n, med, ref in self.rows:
            lines.append(f"{n},{_fmt(med)},{_fmt(ref)}")
        lines.append(f"monotone,{1 if self.monotone else 0},")
        return "\n".join(lines) + "\n"


def _du_trial(args) -> tuple[int, int, int]:
    cfg, gi, ti = args
    rng = child_rng(cfg.rng_seed, gi, ti)
    g = sample_er(cfg.n_grid[gi], cfg.p, rng)
    return (gi, ti, unique_degree_prefix(g))


def check_du_growth(cfg: DegreeGrowthConfig) -> DegreeGrowthResult:
    """Median unique-degree prefix across an n grid versus the scaling reference.

    Reference scale is (p (1-p) n / log2 n) ** (1/4); the medians should be
    non-decreasing in n at a fixed seed.
    """
    tasks = [(cfg, gi, ti) for gi in range(len(cfg.n_grid)) for ti in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_du_trial, tasks, chunksize=4))
    else:
        results = [_du_trial(t) for t in tasks]
    rows = []
    for gi, n in enumerate(cfg.n_grid):
        dus = sorted(du for g, _, du in results if g == gi)
        med = float(statistics.median(dus))
        q = cfg.p * (1.0 - cfg.p)
        ref = (q * n / math.log2(n)) ** 0.25 if q > 0 else 0.0
        rows.append((n, med, ref))
    medians = [m for _, m, _ in rows]
    monotone = all(a <= b for a, b in zip(medians, medians[1:]))
    return DegreeGrowthResult(rows=tuple(rows), monotone=monotone)


@dataclass(frozen=True)
class AmbiguityBoundResult:
    n: int
    lam: int
    epsilon: float
    bound: float
    first_round_sizes: tuple[int, ...]
    exceed_fraction: float

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "lam": self.lam,
            "epsilon": self.epsilon,
            "bound": self.bound,
            "first_round_sizes": list(self.first_round_sizes),
            "exceed_fraction": self.exceed_fraction,
        }

    def to_csv(self) -> str:
        lines = ["n,lam,epsilon,bound,exceed_fraction,first_round_sizes"]
        sizes = ";".join(str(s) for s in self.first_round_sizes)
        lines.append(
            f"{self.n},{self.lam},{_fmt(self.epsilon)},{_fmt(self.bound)},"
            f"{_fmt(self.exceed_fraction)},{sizes}"
        )
        return "\n".join(lines) + "\n"


def check_ambiguity_bound(cfg: ExperimentConfig) -> AmbiguityBoundResult:
    """Fraction of trials whose first-round ambiguity exceeds 2n / (lam eps^2)."""
    if cfg.algorithm != ALGORITHM_TMS or len(cfg.lambda_grid) != 1:
        raise ValidationError("ambiguity check needs a tms config with one seed size")
    lam = cfg.lambda_grid[0]
    eps = cfg.tms.epsilon_for(lam)
    bound = 2.0 * cfg.n / (lam * eps * eps)
    tasks = [(cfg, 0, ti) for ti in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_one, tasks, chunksize=4))
    else:
        outcomes = [_run_one(t) for t in tasks]
    outcomes.sort(key=lambda o: o.trial_index)
    sizes = tuple(int(o.first_ambiguity) for o in outcomes)
    exceed = sum(1 for s in sizes if s > bound) / len(sizes)
    return AmbiguityBoundResult(
        n=cfg.n, lam=lam, epsilon=eps, bound=bound,
        first_round_sizes=sizes, exceed_fraction=exceed,
    )


PRESET_KIND_SWEEP = "sweep"
PRESET_KIND_AMBIGUITY = "ambiguity"
PRESET_KIND_DU = "du"

_DEFAULT_SEED = 20240423


def preset_config(name: str, seed: int | None = None, workers: int = 1):
    """Named desk-scale experiment configurations.

    Returns (kind, config) where kind selects the runner: "sweep" for
    run_trials, "ambiguity" for check_ambiguity_bound, "du" for
    check_du_growth.
    """
    s = _DEFAULT_SEED if seed is None else seed
    mid_joint = JointEdgeDistribution(0.4, 0.1, 0.1, 0.4)
    if name == "smoke":
        return PRESET_KIND_SWEEP, ExperimentConfig(
            algorithm=ALGORITHM_TMS, n=80, joint=JointEdgeDistribution.identical(0.5),
            trials=6, rng_seed=s, lambda_grid=(4, 8, 16), workers=workers,
        )
    if name == "theorem1":
        return PRESET_KIND_SWEEP, ExperimentConfig(
            algorithm=ALGORITHM_MDA, n=1000, joint=JointEdgeDistribution.identical(0.5),
            trials=100, rng_seed=s, workers=workers,
        )
    if name == "theorem2-sweep":
        return PRESET_KIND_SWEEP, ExperimentConfig(
            algorithm=ALGORITHM_TMS, n=1000, joint=mid_joint,
            trials=50, rng_seed=s, lambda_grid=(9, 18, 36, 72, 144, 288),
            workers=workers,
        )
    if name == "lemma2-check":
        return PRESET_KIND_AMBIGUITY, ExperimentConfig(
            algorithm=ALGORITHM_TMS, n=1000, joint=mid_joint,
            trials=50, rng_seed=s, lambda_grid=(144,), workers=workers,
        )
    if name == "lemma1-du":
        return PRESET_KIND_DU, DegreeGrowthConfig(
            n_grid=(500, 1000, 2000, 4000), p=0.5, trials=50, rng_seed=s,
            workers=workers,
        )
    raise ValidationError(f"unknown preset {name!r}")


def preset_names() -> list[str]:
    return ["smoke", "theorem1", "theorem2-sweep", "lemma2-check", "lemma1-du"]


def with_seed(cfg: ExperimentConfig, seed: int) -> ExperimentConfig:
    return replace(cfg, rng_seed=seed)
