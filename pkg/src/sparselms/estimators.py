"""Single-sample online estimators: LMS and its six sparsity-aware variants.

All updates share the a-priori error e(n) = y(n) - w(n)^H x(n) and the
gradient direction e*(n) x(n).  Penalty terms are evaluated at the pre-update
iterate w(n).  Thresholded variants apply the hard-threshold operator after
the additive update; coefficients outside the kept set are exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sparse_ops import complex_sign, hard_threshold, selective_penalty
from .tracker import (
    TrackerParams,
    TrackerState,
    estimate_sparsity,
    make_tracker,
    occupancy_mask,
    tracker_update,
)

VARIANTS = ("lms", "za", "rza", "l0", "sza", "hard", "hard_l0")

_THRESHOLDED = ("sza", "hard", "hard_l0")


@dataclass(frozen=True)
class EstimatorConfig:
    variant: str
    mu: float
    rho: float = 0.0
    beta: float = 0.0
    epsilon: float = 1.0
    s: int | None = None       # None -> budget supplied by the tracker
    burn_in: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variant", self.variant.lower())
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if not 0.0 < self.mu < 2.0:
            raise ValueError(f"step size must satisfy 0 < mu < 2, got {self.mu}")
        if self.rho < 0.0:
            raise ValueError("rho must be nonnegative")
        if self.beta < 0.0:
            raise ValueError("beta must be nonnegative")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")


@dataclass
class EstimatorState:
    w: np.ndarray
    n: int = 0
    last_e: complex = 0j

    @classmethod
    def zeros(cls, n_dim: int) -> "EstimatorState":
        return cls(w=np.zeros(n_dim, dtype=complex))


def prediction_error(state: EstimatorState, sample) -> complex:
    """e(n) = y(n) - w(n)^H x(n); also stored as state.last_e."""
    if sample.x.shape != state.w.shape:
        raise ValueError(f"regressor has shape {sample.x.shape}, expected {state.w.shape}")
    e = sample.y - np.vdot(state.w, sample.x)
    state.last_e = e
    return e


def lms_step(state: EstimatorState, sample, mu: float) -> EstimatorState:
    """w <- w + mu * e* x."""
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.n += 1
    return state


def za_step(state: EstimatorState, sample, mu: float, rho: float) -> EstimatorState:
    """LMS plus uniform zero attraction: w <- w + mu e* x - rho sgn(w)."""
    pen = complex_sign(state.w)
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.w -= rho * pen
    state.n += 1
    return state


def rza_step(state: EstimatorState, sample, mu: float, rho: float, epsilon: float) -> EstimatorState:
    """Reweighted attraction: penalty rho * sgn(w) / (1 + epsilon |w|)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    pen = complex_sign(state.w) / (1.0 + epsilon * np.abs(state.w))
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.w -= rho * pen
    state.n += 1
    return state


def l0_step(state: EstimatorState, sample, mu: float, rho: float, beta: float) -> EstimatorState:
    """Smoothed-l0 attraction: penalty rho * sgn(w) * exp(-beta |w|)."""
    pen = complex_sign(state.w) * np.exp(-beta * np.abs(state.w))
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.w -= rho * pen
    state.n += 1
    return state


def sza_step(state: EstimatorState, sample, mu: float, rho: float, s: int) -> EstimatorState:
    """Selective attraction: sign penalty only off the top-s support."""
    pen = selective_penalty(state.w, s)
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.w -= rho * pen
    state.n += 1
    return state


def hard_step(state: EstimatorState, sample, mu: float, s: int) -> EstimatorState:
    """LMS update followed by the hard threshold with budget s."""
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.w = hard_threshold(state.w, s)
    state.n += 1
    return state


def hard_l0_step(
    state: EstimatorState, sample, mu: float, rho: float, beta: float, s: int
) -> EstimatorState:
    """Smoothed-l0 update followed by the hard threshold."""
    pen = complex_sign(state.w) * np.exp(-beta * np.abs(state.w))
    e = prediction_error(state, sample)
    state.w += (mu * e.conjugate()) * sample.x
    state.w -= rho * pen
    state.w = hard_threshold(state.w, s)
    state.n += 1
    return state


class Estimator:
    """Drives one update rule over a measurement stream.

    Burn-in (the first ``config.burn_in`` samples) disables the sparsity
    machinery: penalized variants fall back to the plain LMS update and
    thresholded variants skip the threshold, except hard_l0 whose penalty
    stays active.  When ``config.s`` is None the threshold budget is supplied
    each step by the tracker, which consumes the update direction b(n) the
    step already computed.
    """

    def __init__(
        self,
        config: EstimatorConfig,
        n_dim: int,
        tracker_params: TrackerParams | None = None,
    ):
        self.config = config
        self.state = EstimatorState.zeros(n_dim)
        self.tracker: TrackerState | None = None
        if tracker_params is not None:
            self.tracker = make_tracker(tracker_params, n_dim)
        if config.s is not None and not 1 <= config.s <= n_dim:
            raise ValueError(f"need 1 <= s <= {n_dim}, got s={config.s}")
        if config.variant in _THRESHOLDED and config.s is None and self.tracker is None:
            raise ValueError(f"{config.variant} needs a fixed s or a tracker")
        self.last_s: int | None = None

    def _budget(self) -> int:
        if self.config.s is not None:
            return self.config.s
        return estimate_sparsity(self.tracker, self.state.w)

    def step(self, sample) -> complex:
        cfg = self.config
        st = self.state
        burn = st.n < cfg.burn_in
        s = None

        if cfg.variant == "lms":
            lms_step(st, sample, cfg.mu)
        elif cfg.variant == "za":
            if burn:
                lms_step(st, sample, cfg.mu)
            else:
                za_step(st, sample, cfg.mu, cfg.rho)
        elif cfg.variant == "rza":
            if burn:
                lms_step(st, sample, cfg.mu)
            else:
                rza_step(st, sample, cfg.mu, cfg.rho, cfg.epsilon)
        elif cfg.variant == "l0":
            if burn:
                lms_step(st, sample, cfg.mu)
            else:
                l0_step(st, sample, cfg.mu, cfg.rho, cfg.beta)
        elif cfg.variant == "sza":
            if burn:
                lms_step(st, sample, cfg.mu)
            else:
                s = self._budget()
                sza_step(st, sample, cfg.mu, cfg.rho, s)
        elif cfg.variant == "hard":
            if burn:
                lms_step(st, sample, cfg.mu)
            else:
                s = self._budget()
                if self.tracker is not None and self.tracker.use_support:
                    mask = occupancy_mask(self.tracker, st.w)
                    lms_step(st, sample, cfg.mu)
                    self._apply_mask(mask, s)
                else:
                    hard_step(st, sample, cfg.mu, s)
        elif cfg.variant == "hard_l0":
            if burn:
                l0_step(st, sample, cfg.mu, cfg.rho, cfg.beta)
            else:
                s = self._budget()
                if self.tracker is not None and self.tracker.use_support:
                    mask = occupancy_mask(self.tracker, st.w)
                    l0_step(st, sample, cfg.mu, cfg.rho, cfg.beta)
                    self._apply_mask(mask, s)
                else:
                    hard_l0_step(st, sample, cfg.mu, cfg.rho, cfg.beta, s)

        if self.tracker is not None:
            tracker_update(self.tracker, st.last_e.conjugate() * sample.x)
        self.last_s = s
        return st.last_e

    def _apply_mask(self, mask: np.ndarray, s: int) -> None:
        # occupancy shortcut: the passing set becomes the next support
        if mask.any():
            self.state.w[~mask] = 0
        else:
            self.state.w = hard_threshold(self.state.w, s)
