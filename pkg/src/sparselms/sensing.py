"""Partial inverse-DFT sensing model.

Measurements are scalar time samples of a length-N window, observed at M
randomly chosen positions.  Each observed position n pairs the noisy sample
y(n) with the regressor row x(n) whose entries are the N-th roots of unity,
so that the spectrum estimate w predicts y(n) as w^H x(n).

The regressor rows carry unit-magnitude entries (no 1/sqrt(N) factor).  Under
uniform position sampling this makes E[x x^H] the exact N x N identity, which
the sparsity tracker relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np


class StreamExhausted(RuntimeError):
    """Raised when the signal source ends before the stream is complete."""


@dataclass(frozen=True)
class RepeatedPass:
    """Collect one window of M samples and replay it ``passes`` times."""

    passes: int


@dataclass(frozen=True)
class Windowed:
    """Draw M fresh samples (fresh positions, fresh noise) per window."""

    windows: int


@dataclass(frozen=True)
class SensingConfig:
    n: int
    m: int
    mode: RepeatedPass | Windowed
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"window length must be positive, got {self.n}")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= M <= N, got M={self.m}, N={self.n}")
        if isinstance(self.mode, RepeatedPass):
            if self.mode.passes < 1:
                raise ValueError("passes must be >= 1")
        elif isinstance(self.mode, Windowed):
            if self.mode.windows < 1:
                raise ValueError("windows must be >= 1")
        else:
            raise ValueError(f"unknown stream mode: {self.mode!r}")

    @property
    def total_samples(self) -> int:
        if isinstance(self.mode, RepeatedPass):
            return self.mode.passes * self.m
        return self.mode.windows * self.m

    @property
    def n_windows(self) -> int:
        return 1 if isinstance(self.mode, RepeatedPass) else self.mode.windows


@dataclass
class MeasurementSample:
    """One observation: regressor row x, noisy scalar y, emission counter n."""

    x: np.ndarray
    y: float
    n: int


@lru_cache(maxsize=8)
def fourier_rows(n: int) -> np.ndarray:
    """All N regressor rows as an N x N read-only matrix, F[t, k] = x(t)_k.

    Entries are looked up from the single table of N-th roots of unity so
    that equal angles produce bit-identical values.
    """
    roots = np.exp(-2j * np.pi * np.arange(n) / n)
    idx = np.outer(np.arange(n), np.arange(n)) % n
    rows = roots[idx]
    rows.flags.writeable = False
    return rows


def regressor_row(n: int, t: int) -> np.ndarray:
    """Regressor for time index t: x_k = exp(-2j*pi*k*t/n), unit magnitude."""
    if not 0 <= t < n:
        raise ValueError(f"time index {t} outside [0, {n})")
    return fourier_rows(n)[t]


def sample_indices(config: SensingConfig, window: int, rng=None) -> np.ndarray:
    """M unique sorted positions in [0, N) for one window.

    Deterministic given (config.seed, window) when no rng is supplied.
    """
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, window]))
    idx = rng.choice(config.n, size=config.m, replace=False)
    idx.sort()
    return idx


def _noise_rng(config: SensingConfig, window: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([config.seed, window, 1]))


def make_stream(
    config: SensingConfig,
    windows: Iterable[np.ndarray],
    noise_std: float = 0.0,
) -> Iterator[MeasurementSample]:
    """Turn latent signal windows into an ordered measurement stream.

    ``windows`` yields length-N real vectors (the noiseless signal, one per
    window).  RepeatedPass consumes one window and replays its M noisy
    samples ``passes`` times in the same (ascending-position) order, noise
    included: the device measured once, the estimator sees the measurements
    repeatedly.  Windowed consumes one window per emission round with fresh
    positions and fresh noise.
    """
    rows = fourier_rows(config.n)
    source = iter(windows)

    def next_window(i: int) -> np.ndarray:
        try:
            z = np.asarray(next(source), dtype=float)
        except StopIteration:
            raise StreamExhausted(
                f"signal source ended after {i} windows; "
                f"{config.n_windows} required"
            ) from None
        if z.shape != (config.n,):
            raise ValueError(f"window {i} has shape {z.shape}, expected ({config.n},)")
        return z

    counter = 0
    if isinstance(config.mode, RepeatedPass):
        z = next_window(0)
        idx = sample_indices(config, 0)
        y = z[idx]
        if noise_std > 0.0:
            y = y + _noise_rng(config, 0).normal(0.0, noise_std, size=config.m)
        for _ in range(config.mode.passes):
            for j in range(config.m):
                yield MeasurementSample(rows[idx[j]], y[j], counter)
                counter += 1
    else:
        for w in range(config.mode.windows):
            z = next_window(w)
            idx = sample_indices(config, w)
            y = z[idx]
            if noise_std > 0.0:
                y = y + _noise_rng(config, w).normal(0.0, noise_std, size=config.m)
            for j in range(config.m):
                yield MeasurementSample(rows[idx[j]], y[j], counter)
                counter += 1
