from __future__ import annotations

import pytest

from seedmatch import JointEdgeDistribution, NotBracketedError, ValidationError
from seedmatch.harness import (
    DegreeGrowthConfig,
    ExperimentConfig,
    SweepResult,
    SweepRow,
    check_ambiguity_bound,
    check_du_growth,
    estimate_threshold,
    preset_config,
    preset_names,
    run_trials,
    wilson_interval,
)
from seedmatch.tms import TmsConfig

IDENTICAL_FAIR = JointEdgeDistribution.identical(0.5)
MID_JOINT = JointEdgeDistribution(0.4, 0.1, 0.1, 0.4)


def test_wilson_interval_contains_rate():
    lo, hi = wilson_interval(7, 10)
    assert 0.0 <= lo <= 0.7 <= hi <= 1.0
    lo, hi = wilson_interval(0, 10)
    assert lo == 0.0 and hi > 0.0
    lo, hi = wilson_interval(10, 10)
    assert hi == 1.0 and lo < 1.0


def test_wilson_interval_validation():
    with pytest.raises(ValidationError):
        wilson_interval(3, 0)
    with pytest.raises(ValidationError):
        wilson_interval(5, 3)


def _row(lam, successes, trials=10):
    lo, hi = wilson_interval(successes, trials)
    return SweepRow(
        algorithm="tms", n=100, lam=lam, trials=trials, successes=successes,
        wilson_lo=lo, wilson_hi=hi, mean_rounds=1.0, mean_first_ambiguity=0.0,
        mean_final_ambiguity=0.0, mean_ambiguity_per_round=(0.0,),
        mean_accuracy=successes / trials, mean_d_u=None,
        predicted_threshold=None, epsilon0=0.3,
    )


def _sweep(rows):
    cfg = ExperimentConfig(
        algorithm="tms", n=100, joint=IDENTICAL_FAIR, trials=10,
        rng_seed=0, lambda_grid=tuple(r.lam for r in rows),
    )
    return SweepResult(config=cfg, rows=tuple(rows))


def test_estimate_threshold_interpolates():
    sweep = _sweep([_row(10, 0), _row(20, 10)])
    assert estimate_threshold(sweep) == pytest.approx(15.0)


def test_estimate_threshold_respects_partial_rates():
    sweep = _sweep([_row(10, 2), _row(20, 8)])
    # 0.2 at 10, 0.8 at 20: crossing at 15
    assert estimate_threshold(sweep) == pytest.approx(15.0)


def test_estimate_threshold_not_bracketed():
    with pytest.raises(NotBracketedError):
        estimate_threshold(_sweep([_row(10, 10), _row(20, 10)]))
    with pytest.raises(NotBracketedError):
        estimate_threshold(_sweep([_row(10, 0)]))


def test_run_trials_fully_seeded_always_succeeds():
    cfg = ExperimentConfig(
        algorithm="tms", n=25, joint=MID_JOINT, trials=1, rng_seed=5,
        lambda_grid=(25,),
    )
    result = run_trials(cfg)
    assert result.rows[0].successes == 1
    assert result.rows[0].success_rate == 1.0


def test_run_trials_deterministic_and_worker_invariant():
    cfg1 = ExperimentConfig(
        algorithm="tms", n=40, joint=IDENTICAL_FAIR, trials=4, rng_seed=11,
        lambda_grid=(6, 12), workers=1,
    )
    cfg2 = ExperimentConfig(
        algorithm="tms", n=40, joint=IDENTICAL_FAIR, trials=4, rng_seed=11,
        lambda_grid=(6, 12), workers=2,
    )
    a = run_trials(cfg1).to_csv()
    b = run_trials(cfg1).to_csv()
    c = run_trials(cfg2).to_csv()
    assert a == b == c


def test_run_trials_mda():
    cfg = ExperimentConfig(
        algorithm="mda", n=120, joint=IDENTICAL_FAIR, trials=5, rng_seed=3,
    )
    result = run_trials(cfg)
    row = result.rows[0]
    assert row.lam is None
    assert row.successes == 5
    assert row.mean_d_u is not None and row.mean_d_u >= 1
    csv = result.to_csv()
    assert csv.splitlines()[0].startswith("algorithm,n,lam")


def test_experiment_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(algorithm="qap", n=10, joint=IDENTICAL_FAIR, trials=1, rng_seed=0)
    with pytest.raises(ValidationError):
        ExperimentConfig(algorithm="tms", n=10, joint=IDENTICAL_FAIR, trials=1, rng_seed=0)
    with pytest.raises(ValidationError):
        ExperimentConfig(
            algorithm="tms", n=10, joint=IDENTICAL_FAIR, trials=1, rng_seed=0,
            lambda_grid=(11,),
        )


def test_experiment_config_from_json():
    cfg = ExperimentConfig.from_json_obj(
        {
            "algorithm": "tms",
            "n": 50,
            "joint": {"model": "identical", "p": 0.5},
            "trials": 3,
            "rng_seed": 9,
            "lambda_grid": [5, 10],
            "tms": {"epsilon": 0.4, "max_rounds": 2},
        }
    )
    assert cfg.tms == TmsConfig(epsilon=0.4, max_rounds=2)
    assert cfg.lambda_grid == (5, 10)
    with pytest.raises(ValidationError):
        ExperimentConfig.from_json_obj({"algorithm": "tms"})


def test_check_du_growth_zero_p():
    cfg = DegreeGrowthConfig(n_grid=(50, 100), p=0.0, trials=3, rng_seed=1)
    res = check_du_growth(cfg)
    assert all(med == 0.0 for _, med, _ in res.rows)
    assert res.monotone


def test_check_du_growth_small_grid():
    cfg = DegreeGrowthConfig(n_grid=(100, 400), p=0.5, trials=10, rng_seed=2)
    res = check_du_growth(cfg)
    assert len(res.rows) == 2
    for n, med, ref in res.rows:
        assert med >= 0.0 and ref > 0.0
    csv = res.to_csv()
    assert csv.splitlines()[0] == "n,median_d_u,reference"


def test_check_ambiguity_bound_fully_seeded():
    cfg = ExperimentConfig(
        algorithm="tms", n=30, joint=MID_JOINT, trials=4, rng_seed=6,
        lambda_grid=(30,),
    )
    res = check_ambiguity_bound(cfg)
    assert res.exceed_fraction == 0.0
    assert all(s == 0 for s in res.first_round_sizes)


def test_check_ambiguity_bound_negative_control():
    # independent joint: everything is ambiguous and the bound is blown
    cfg = ExperimentConfig(
        algorithm="tms", n=200, joint=JointEdgeDistribution(0.25, 0.25, 0.25, 0.25),
        trials=5, rng_seed=6, lambda_grid=(50,),
    )
    res = check_ambiguity_bound(cfg)
    assert res.exceed_fraction == 1.0
    assert all(s == 150 for s in res.first_round_sizes)


def test_check_ambiguity_bound_validation():
    cfg = ExperimentConfig(
        algorithm="tms", n=30, joint=MID_JOINT, trials=2, rng_seed=0,
        lambda_grid=(5, 10),
    )
    with pytest.raises(ValidationError):
        check_ambiguity_bound(cfg)


def test_presets_exist_and_build():
    for name in preset_names():
        kind, cfg = preset_config(name, seed=1)
        assert kind in ("sweep", "ambiguity", "du")
        assert cfg is not None
    with pytest.raises(ValidationError):
        preset_config("nope")
