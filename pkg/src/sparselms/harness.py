"""Monte-Carlo experiment runner: trials, r-MSE curves, CSV emission.

A trial draws its own sine frequencies, sampling positions and noise, all
derived deterministically from (experiment seed, trial index), so every
algorithm inside one experiment sees identical measurement realizations and
cross-algorithm comparisons are paired.  Trial averaging happens on linear
r-MSE values; conversion to dB (with a -120 dB floor) is a reporting step.
"""

from __future__ import annotations

import csv
import itertools
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .estimators import Estimator, EstimatorConfig
from .sensing import SensingConfig, Windowed, make_stream
from .signals import SignalSpec, multisine, noise_std, random_bins, signal_power, true_spectrum
from .sparse_ops import SupportSet, support
from .tracker import TrackerParams

DB_FLOOR = -120.0


def rmse(w_true: np.ndarray, w_est: np.ndarray) -> float:
    """Relative mean-square error ||w - w_est||^2 / ||w||^2 (linear scale)."""
    w_true = np.asarray(w_true, dtype=complex)
    w_est = np.asarray(w_est, dtype=complex)
    sig = float((w_true.real ** 2 + w_true.imag ** 2).sum())
    if sig == 0.0:
        raise ValueError("reference spectrum must be nonzero")
    d = w_true - w_est
    return float((d.real ** 2 + d.imag ** 2).sum()) / sig


def rmse_db(value) -> np.ndarray | float:
    """Linear r-MSE to dB, floored at -120 dB."""
    arr = np.maximum(np.asarray(value, dtype=float), 10.0 ** (DB_FLOOR / 10.0))
    out = 10.0 * np.log10(arr)
    if np.ndim(value) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class TrackingSpec:
    """Two-phase signal: after ``phase_windows[0]`` windows the signal gains
    ``extra_sines`` additional sines on fresh bins."""

    phase_windows: tuple[int, int]
    extra_sines: int


@dataclass(frozen=True)
class AlgorithmSpec:
    label: str
    estimator: EstimatorConfig
    tracker: TrackerParams | None = None


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    signal: SignalSpec
    sensing: SensingConfig
    algorithms: tuple[AlgorithmSpec, ...]
    trials: int
    seed: int
    tracking: TrackingSpec | None = None
    db_mean: bool = False  # average per-trial dB values instead of linear r-MSE

    def __post_init__(self):
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ValueError("algorithm labels must be unique")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.tracking is not None:
            if not isinstance(self.sensing.mode, Windowed):
                raise ValueError("tracking experiments require windowed sensing")
            if sum(self.tracking.phase_windows) != self.sensing.mode.windows:
                raise ValueError("phase windows must sum to the sensing window count")


@dataclass
class TrialRecord:
    label: str
    seed: tuple[int, int]  # (experiment seed, trial index)
    rmse_lin_trajectory: np.ndarray
    s_trajectory: np.ndarray | None
    final_support: SupportSet
    wallclock: float

    @property
    def rmse_db_trajectory(self) -> np.ndarray:
        return rmse_db(self.rmse_lin_trajectory)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    curves_lin: dict[str, np.ndarray]
    curves_db: dict[str, np.ndarray]
    s_mean: dict[str, np.ndarray | None]
    records: dict[str, list[TrialRecord]]

    def steady_state_db(self, label: str, tail: int | None = None) -> float:
        """Mean linear r-MSE over the trailing ``tail`` iterations, in dB."""
        curve = self.curves_lin[label]
        if tail is None:
            tail = max(1, curve.size // 10)
        return rmse_db(float(curve[-tail:].mean()))


@dataclass(frozen=True)
class _Phase:
    sensing: SensingConfig
    z: np.ndarray
    w_true: np.ndarray
    sigma: float
    windows: int


def _derived_seed(*entropy: int) -> int:
    return int(np.random.SeedSequence(list(entropy)).generate_state(1, np.uint64)[0])


def _build_phases(spec: ExperimentSpec, trial: int) -> list[_Phase]:
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, trial, 0]))
    sig = spec.signal
    if sig.bins is None:
        sig = replace(sig, bins=random_bins(sig.n, sig.sines, rng))

    if spec.tracking is None:
        sensing = replace(spec.sensing, seed=_derived_seed(spec.seed, trial, 1))
        sigma = noise_std(signal_power(sig), sig.snr_db)
        return [
            _Phase(sensing, multisine(sig), true_spectrum(sig), sigma, spec.sensing.n_windows)
        ]

    # two-phase tracking signal: extra sines appear on fresh, distinct bins
    extra = spec.tracking.extra_sines
    pool = np.array(sorted(set(range(1, sig.n // 2)) - set(sig.bins)))
    extra_bins = tuple(int(b) for b in rng.choice(pool, size=extra, replace=False))
    sig2 = replace(
        sig,
        sines=sig.sines + extra,
        bins=sig.bins + extra_bins,
        amps=None if sig.amps is None else sig.amps + (1.0,) * extra,
    )
    phases = []
    for p, (phase_sig, wcount) in enumerate(zip((sig, sig2), spec.tracking.phase_windows)):
        sensing = replace(
            spec.sensing,
            mode=Windowed(wcount),
            seed=_derived_seed(spec.seed, trial, 1, p),
        )
        sigma = noise_std(signal_power(phase_sig), phase_sig.snr_db)
        phases.append(
            _Phase(sensing, multisine(phase_sig), true_spectrum(phase_sig), sigma, wcount)
        )
    return phases


def run_trial(spec: ExperimentSpec, algo: AlgorithmSpec, trial: int) -> TrialRecord:
    """One deterministic trial of one algorithm; records r-MSE per iteration."""
    phases = _build_phases(spec, trial)
    est = Estimator(algo.estimator, spec.signal.n, algo.tracker)
    adaptive = algo.tracker is not None and algo.estimator.s is None

    total = sum(p.sensing.total_samples for p in phases)
    rmse_lin = np.empty(total)
    s_traj = np.full(total, np.nan) if adaptive else None

    t0 = time.perf_counter()
    i = 0
    for phase in phases:
        w_true = phase.w_true
        sig2 = float((w_true.real ** 2 + w_true.imag ** 2).sum())
        stream = make_stream(
            phase.sensing, itertools.repeat(phase.z, phase.windows), phase.sigma
        )
        for sample in stream:
            est.step(sample)
            d = est.state.w - w_true
            rmse_lin[i] = float((d.real ** 2 + d.imag ** 2).sum()) / sig2
            if adaptive and est.last_s is not None:
                s_traj[i] = est.last_s
            i += 1
    assert i == total

    return TrialRecord(
        label=algo.label,
        seed=(spec.seed, trial),
        rmse_lin_trajectory=rmse_lin,
        s_trajectory=s_traj,
        final_support=support(est.state.w),
        wallclock=time.perf_counter() - t0,
    )


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """All trials of all algorithms, averaged per iteration.

    Trials are independent; results do not depend on execution order because
    aggregation is a fixed-order reduction after all trials complete.
    """
    curves_lin: dict[str, np.ndarray] = {}
    curves_db: dict[str, np.ndarray] = {}
    s_mean: dict[str, np.ndarray | None] = {}
    records: dict[str, list[TrialRecord]] = {}

    for algo in spec.algorithms:
        recs = [run_trial(spec, algo, t) for t in range(spec.trials)]
        lin = np.mean([r.rmse_lin_trajectory for r in recs], axis=0)
        if spec.db_mean:
            db = np.mean([r.rmse_db_trajectory for r in recs], axis=0)
        else:
            db = rmse_db(lin)
        curves_lin[algo.label] = lin
        curves_db[algo.label] = db
        if recs[0].s_trajectory is not None:
            stack = np.stack([r.s_trajectory for r in recs])
            valid = ~np.isnan(stack)
            counts = valid.sum(axis=0)
            sums = np.where(valid, stack, 0.0).sum(axis=0)
            s_mean[algo.label] = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        else:
            s_mean[algo.label] = None
        records[algo.label] = recs

    return ExperimentResult(spec, curves_lin, curves_db, s_mean, records)


def run_tracking_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Runner for two-phase tracking experiments (requires spec.tracking)."""
    if spec.tracking is None:
        raise ValueError("spec has no tracking section")
    return run_experiment(spec)


def time_to_reach(rmse_lin: np.ndarray, threshold_db: float) -> int | None:
    """1-based iteration at which the trajectory first reaches threshold_db."""
    hits = np.flatnonzero(rmse_lin <= 10.0 ** (threshold_db / 10.0))
    if hits.size == 0:
        return None
    return int(hits[0]) + 1


def bootstrap_diff_ci(
    a: np.ndarray,
    b: np.ndarray,
    n_boot: int = 4000,
    alpha: float = 0.05,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile bootstrap CI for mean(b - a) over paired trials."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("paired samples must have equal length")
    diffs = b - a
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, diffs.size, size=(n_boot, diffs.size))
    means = diffs[idx].mean(axis=1)
    lo, hi = np.quantile(means, [alpha / 2.0, 1.0 - alpha / 2.0])
    return float(lo), float(hi)


def write_curves_csv(result: ExperimentResult, path) -> None:
    """One row per (algorithm, iteration): experiment,label,iteration,rmse_db,s_est_mean."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["experiment", "label", "iteration", "rmse_db", "s_est_mean"])
        for label, db in result.curves_db.items():
            s_curve = result.s_mean[label]
            fixed_s = _fixed_budget(result.spec, label)
            for i in range(db.size):
                if s_curve is not None and not math.isnan(s_curve[i]):
                    s_val = f"{s_curve[i]:.4f}"
                elif fixed_s is not None:
                    s_val = str(fixed_s)
                else:
                    s_val = ""
                w.writerow([result.spec.name, label, i + 1, f"{db[i]:.6f}", s_val])


def _fixed_budget(spec: ExperimentSpec, label: str) -> int | None:
    for algo in spec.algorithms:
        if algo.label == label:
            if algo.estimator.variant in ("sza", "hard", "hard_l0"):
                return algo.estimator.s
            return None
    return None


def write_summary_csv(result: ExperimentResult, path, tail: int | None = None) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(
            ["experiment", "label", "trials", "iterations", "final_rmse_db", "steady_rmse_db"]
        )
        for label, db in result.curves_db.items():
            w.writerow(
                [
                    result.spec.name,
                    label,
                    result.spec.trials,
                    db.size,
                    f"{db[-1]:.6f}",
                    f"{result.steady_state_db(label, tail):.6f}",
                ]
            )


def write_gnuplot_dat(result: ExperimentResult, path) -> None:
    """Wide whitespace-separated layout: iteration then one dB column per label."""
    labels = list(result.curves_db)
    n = next(iter(result.curves_db.values())).size
    with open(path, "w") as f:
        f.write("# iteration " + " ".join(labels) + "\n")
        for i in range(n):
            row = " ".join(f"{result.curves_db[lb][i]:.6f}" for lb in labels)
            f.write(f"{i + 1} {row}\n")
