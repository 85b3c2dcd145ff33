import hashlib
import math
from pathlib import Path

import numpy as np
import pytest

from sparselms.estimators import EstimatorConfig
from sparselms.experiments import (
    REGISTRY,
    build_exp1,
    build_exp2,
    build_exp4_tracking,
    get_experiment,
    load_specs,
    save_spec,
    spec_from_dict,
    spec_to_dict,
)
from sparselms.harness import (
    AlgorithmSpec,
    ExperimentSpec,
    TrackingSpec,
    bootstrap_diff_ci,
    rmse,
    rmse_db,
    run_experiment,
    run_tracking_experiment,
    run_trial,
    time_to_reach,
    write_curves_csv,
    write_gnuplot_dat,
    write_summary_csv,
)
from sparselms.sensing import RepeatedPass, SensingConfig, Windowed
from sparselms.signals import SignalSpec
from sparselms.tracker import TrackerParams


def tiny_spec(trials=2, **overrides):
    base = dict(
        name="tiny",
        signal=SignalSpec(n=32, sines=2, snr_db=20.0),
        sensing=SensingConfig(n=32, m=16, mode=RepeatedPass(20)),
        algorithms=(
            AlgorithmSpec("HARD-4", EstimatorConfig("hard", mu=1 / 32, s=4, burn_in=16)),
            AlgorithmSpec("LMS", EstimatorConfig("lms", mu=1 / 32)),
        ),
        trials=trials,
        seed=99,
    )
    base.update(overrides)
    return ExperimentSpec(**base)


# -- rmse ----------------------------------------------------------------------


def test_rmse_zero_estimate():
    assert rmse([1.0, 0.0], [0.0, 0.0]) == 1.0
    assert rmse_db(1.0) == 0.0


def test_rmse_exact_estimate_floors():
    assert rmse([1.0, 0.0], [1.0, 0.0]) == 0.0
    assert rmse_db(0.0) == -120.0


def test_rmse_hand_example():
    assert rmse([1.0, 0.0], [1.0, 0.1]) == pytest.approx(0.01)
    assert rmse_db(0.01) == pytest.approx(-20.0)


def test_rmse_zero_reference_rejected():
    with pytest.raises(ValueError):
        rmse([0.0, 0.0], [1.0, 0.0])


# -- determinism -----------------------------------------------------------------


def test_trial_deterministic():
    spec = tiny_spec()
    a = run_trial(spec, spec.algorithms[0], 0)
    b = run_trial(spec, spec.algorithms[0], 0)
    np.testing.assert_array_equal(a.rmse_lin_trajectory, b.rmse_lin_trajectory)
    assert a.final_support == b.final_support


def test_trials_share_realizations_across_algorithms():
    # same derivation for bins/indices/noise regardless of the algorithm
    spec = tiny_spec()
    rec = run_trial(spec, spec.algorithms[1], 0)
    assert rec.rmse_lin_trajectory[0] != rec.rmse_lin_trajectory[-1]


def test_trajectory_length_matches_stream():
    spec = tiny_spec(trials=1)
    rec = run_trial(spec, spec.algorithms[0], 0)
    assert rec.rmse_lin_trajectory.size == spec.sensing.total_samples


def test_experiment_csv_byte_identical(tmp_path):
    spec = tiny_spec()
    digests = []
    for run in range(2):
        res = run_experiment(spec)
        path = tmp_path / f"curves_{run}.csv"
        write_curves_csv(res, path)
        digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
    assert digests[0] == digests[1]


def test_summary_and_gnuplot_outputs(tmp_path):
    res = run_experiment(tiny_spec())
    write_summary_csv(res, tmp_path / "summary.csv")
    write_gnuplot_dat(res, tmp_path / "curves.dat")
    summary = (tmp_path / "summary.csv").read_text().splitlines()
    assert summary[0] == "experiment,label,trials,iterations,final_rmse_db,steady_rmse_db"
    assert len(summary) == 3
    dat = (tmp_path / "curves.dat").read_text().splitlines()
    assert dat[0].startswith("# iteration")
    assert len(dat) == 1 + tiny_spec().sensing.total_samples


def test_db_average_flag_changes_convention():
    lin_spec = tiny_spec()
    db_spec = tiny_spec(db_mean=True)
    lin_res = run_experiment(lin_spec)
    db_res = run_experiment(db_spec)
    a = lin_res.curves_db["LMS"]
    b = db_res.curves_db["LMS"]
    # mean of dB <= dB of mean (Jensen); equality only for degenerate spread
    assert np.all(b <= a + 1e-9)
    assert not np.allclose(a, b)


def test_monotone_sanity_noiseless_full_sampling():
    spec = tiny_spec(
        trials=2,
        signal=SignalSpec(n=32, sines=2, snr_db=math.inf),
        sensing=SensingConfig(n=32, m=32, mode=RepeatedPass(50)),
    )
    res = run_experiment(spec)
    for label in ("HARD-4", "LMS"):
        assert res.curves_db[label][-1] < -80.0


# -- helpers ---------------------------------------------------------------------


def test_time_to_reach():
    traj = np.array([1.0, 0.5, 0.02, 0.001])
    assert time_to_reach(traj, -15.0) == 3  # 0.02 < 10^-1.5
    assert time_to_reach(traj, -40.0) is None


def test_bootstrap_ci_contains_true_difference():
    rng = np.random.default_rng(0)
    a = rng.normal(10.0, 1.0, size=200)
    b = rng.normal(12.0, 1.0, size=200)
    lo, hi = bootstrap_diff_ci(a, b, seed=1)
    assert lo < 2.0 < hi
    assert lo > 0.0  # clearly separated


def test_bootstrap_requires_paired_lengths():
    with pytest.raises(ValueError):
        bootstrap_diff_ci(np.zeros(3), np.zeros(4))


# -- tracking plumbing -------------------------------------------------------------


def test_tracking_spec_validation():
    with pytest.raises(ValueError):
        tiny_spec(tracking=TrackingSpec((5, 5), 2))  # repeated-pass sensing
    with pytest.raises(ValueError):
        tiny_spec(
            sensing=SensingConfig(n=32, m=16, mode=Windowed(8)),
            tracking=TrackingSpec((5, 5), 2),
        )  # windows mismatch


def test_tracking_experiment_small():
    spec = ExperimentSpec(
        name="tiny-track",
        signal=SignalSpec(n=64, sines=2, snr_db=20.0),
        sensing=SensingConfig(n=64, m=32, mode=Windowed(60)),
        algorithms=(
            AlgorithmSpec(
                "EST",
                EstimatorConfig("hard", mu=1 / 64, burn_in=64),
                tracker=TrackerParams(lam=0.98, xi=20 / 64, q_star=0.05),
            ),
        ),
        trials=1,
        seed=5,
        tracking=TrackingSpec(phase_windows=(30, 30), extra_sines=2),
    )
    res = run_tracking_experiment(spec)
    rec = res.records["EST"][0]
    m = spec.sensing.m
    s_phase1 = np.nanmean(rec.s_trajectory[20 * m : 30 * m])
    s_phase2 = np.nanmean(rec.s_trajectory[-10 * m :])
    assert s_phase1 == pytest.approx(4, abs=1.0)
    assert s_phase2 == pytest.approx(8, abs=1.5)
    assert rec.rmse_lin_trajectory.size == 60 * m


def test_run_tracking_requires_tracking_section():
    with pytest.raises(ValueError):
        run_tracking_experiment(tiny_spec())


# -- registry and config files -------------------------------------------------------


def test_registry_names():
    assert set(REGISTRY) == {"exp1", "exp2", "exp3", "exp-msweep", "exp4-tracking"}


def test_get_experiment_overrides():
    spec = get_experiment("exp2", trials=5, n=256, seed=1)
    assert spec.trials == 5
    assert spec.signal.n == 256
    assert spec.sensing.m == 51  # scaled from 200/1000
    assert spec.seed == 1
    assert spec.algorithms[0].estimator.mu == pytest.approx(1 / 256)


def test_get_experiment_unknown():
    with pytest.raises(KeyError):
        get_experiment("exp9")


def test_spec_dict_round_trip():
    for build in (build_exp1, build_exp2, build_exp4_tracking):
        spec = build()
        assert spec_from_dict(spec_to_dict(spec)) == spec


def test_preset_files_match_registry():
    import sparselms

    presets = Path(sparselms.__file__).parent / "presets"
    for name in ("exp1", "exp2", "exp3", "exp4-tracking"):
        loaded = load_specs(presets / f"{name}.yaml")
        assert loaded[0] == get_experiment(name)
    sweep = load_specs(presets / "exp-msweep.yaml")
    assert sweep == get_experiment("exp-msweep")


def test_save_and_load_round_trip(tmp_path):
    spec = tiny_spec()
    save_spec(spec, tmp_path / "tiny.yaml")
    assert load_specs(tmp_path / "tiny.yaml") == [spec]


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        tiny_spec(
            algorithms=(
                AlgorithmSpec("A", EstimatorConfig("lms", mu=0.01)),
                AlgorithmSpec("A", EstimatorConfig("lms", mu=0.02)),
            )
        )


# -- CLI ------------------------------------------------------------------------


def test_cli_list_and_run(tmp_path, capsys):
    from sparselms.cli import main

    assert main(["list"]) == 0
    captured = capsys.readouterr()
    assert "exp1" in captured.out

    spec = tiny_spec(trials=1)
    save_spec(spec, tmp_path / "tiny.yaml")
    assert main(["run", str(tmp_path / "tiny.yaml"), "--out", str(tmp_path / "res")]) == 0
    assert (tmp_path / "res" / "tiny_curves.csv").exists()
    assert (tmp_path / "res" / "tiny_summary.csv").exists()


def test_cli_multi_spec_writes_sweep_summary(tmp_path):
    from sparselms.cli import main
    from sparselms.experiments import save_specs

    specs = [
        tiny_spec(trials=1, name="sweep-m8", sensing=SensingConfig(n=32, m=8, mode=RepeatedPass(20))),
        tiny_spec(trials=1, name="sweep-m16"),
    ]
    save_specs(specs, tmp_path / "sweep.yaml")
    assert main(["run", str(tmp_path / "sweep.yaml"), "--out", str(tmp_path / "res")]) == 0
    summary = (tmp_path / "res" / "msweep_summary.csv").read_text().splitlines()
    assert summary[0] == "experiment,label,m,steady_rmse_db"
    assert len(summary) == 1 + 2 * len(specs[0].algorithms)


def test_cli_verify_and_oracle_small():
    from sparselms.cli import main

    assert main(["verify", "--draws", "500"]) == 0
    assert main(["oracle", "--draws", "500"]) == 0
