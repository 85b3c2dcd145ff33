"""Randomized property suites and brute-force cross-checks.

The reference routines here deliberately avoid the library's own code paths:
the top-k reference ranks by pairwise magnitude counting, and the sensing
identity is accumulated as an explicit sum of outer products.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .estimators import Estimator, EstimatorConfig
from .sensing import SensingConfig, Windowed, fourier_rows, make_stream, regressor_row
from .signals import SignalSpec, multisine, noise_std, signal_power, true_spectrum
from .sparse_ops import hard_threshold, ser, theorem2_check, theorem3_check


@dataclass
class SuiteResult:
    name: str
    draws: int
    failures: int
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __str__(self) -> str:
        status = "ok" if self.passed else "FAILED"
        msg = f"{self.name}: {self.draws} draws, {self.failures} failures [{status}]"
        for note in self.notes:
            msg += f"\n  {note}"
        return msg


def _random_sparse(rng, n: int, s: int) -> np.ndarray:
    """s-sparse complex vector with nonzero magnitudes in [0.3, 2]."""
    w = np.zeros(n, dtype=complex)
    pos = rng.choice(n, size=s, replace=False)
    mags = rng.uniform(0.3, 2.0, size=s)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=s)
    w[pos] = mags * np.exp(1j * phases)
    return w


def _perturb_within(rng, w: np.ndarray, radius_sq: float) -> np.ndarray:
    """w plus a dense complex perturbation with ||u||^2 = t * radius_sq, t < 1."""
    u = rng.standard_normal(w.size) + 1j * rng.standard_normal(w.size)
    t = rng.uniform(0.01, 0.99)
    u *= math.sqrt(t * radius_sq) / np.linalg.norm(u)
    return w + u


def theorem2_suite(draws: int = 100_000, seed: int = 7) -> SuiteResult:
    """Inside-ball perturbations must preserve exact support recovery; also
    checks the induced SER bound (> 2s whenever the premise holds)."""
    rng = np.random.default_rng(seed)
    failures = 0
    res = SuiteResult("theorem2", draws, 0)
    for _ in range(draws):
        n = int(rng.integers(2, 33))
        s = int(rng.integers(1, max(2, n // 2 + 1)))
        w = _random_sparse(rng, n, s)
        q2 = (np.abs(w[w != 0]) ** 2).min()
        w_hat = _perturb_within(rng, w, q2 / 2.0)
        check = theorem2_check(w, w_hat)
        if not check.premise:
            failures += 1
            res.notes.append("construction left the premise ball")
            continue
        if not check.conclusion:
            failures += 1
        if not ser(w, w_hat) > 2 * s:
            failures += 1
            res.notes.append("SER bound violated under the premise")
    res.failures = failures
    return res


def theorem3_suite(draws: int = 100_000, seed: int = 8) -> SuiteResult:
    """Relaxed-ball perturbations with tau in {1,2,3} must preserve the
    superset conclusion for the widened budget d = s + tau."""
    rng = np.random.default_rng(seed)
    failures = 0
    res = SuiteResult("theorem3", draws, 0)
    for _ in range(draws):
        tau = int(rng.integers(1, 4))
        n = int(rng.integers(tau + 2, 33))
        s_max = n - tau - 1
        s = int(rng.integers(1, s_max + 1))
        w = _random_sparse(rng, n, s)
        q2 = (np.abs(w[w != 0]) ** 2).min()
        w_hat = _perturb_within(rng, w, q2 * (1.0 - 1.0 / (tau + 2.0)))
        while np.count_nonzero(w_hat) < s + tau:  # dense a.s.; guard anyway
            w_hat = _perturb_within(rng, w, q2 * (1.0 - 1.0 / (tau + 2.0)))
        check = theorem3_check(w, w_hat, tau)
        if not check.premise:
            failures += 1
            res.notes.append("construction left the premise region")
            continue
        if not check.conclusion:
            failures += 1
    res.failures = failures
    return res


def tightness_example(
    n: int = 8, s: int = 3, eps: float = 1e-6, seed: int = 9
) -> tuple[np.ndarray, np.ndarray, float]:
    """Construct w_hat with ||w - w_hat||^2 = q^2/2 + eps that breaks support
    equality: halve the weakest support coefficient and plant a slightly
    larger impostor off the support."""
    rng = np.random.default_rng(seed)
    if s >= n:
        raise ValueError("need s < n to place the impostor")
    w = _random_sparse(rng, n, s)
    mags = np.abs(w)
    on = np.flatnonzero(mags > 0)
    ell = on[np.argmin(mags[on])]
    q = mags[ell]
    off = np.setdiff1d(np.arange(n), on)
    k = off[0]

    w_hat = w.copy()
    w_hat[ell] = w[ell] / 2.0
    delta = (-q + math.sqrt(q * q + 4.0 * eps)) / 2.0  # q*delta + delta^2 = eps
    w_hat[k] = (q / 2.0 + delta) * np.exp(1j * rng.uniform(0, 2 * np.pi))

    err2 = float((np.abs(w - w_hat) ** 2).sum())
    return w, w_hat, err2


def tightness_suite(eps: float = 1e-6, seed: int = 9) -> SuiteResult:
    res = SuiteResult("theorem2-tightness", 1, 0)
    w, w_hat, err2 = tightness_example(eps=eps, seed=seed)
    q2 = float((np.abs(w[w != 0]) ** 2).min())
    check = theorem2_check(w, w_hat)
    if check.premise:
        res.failures += 1
        res.notes.append("near-violation unexpectedly satisfied the premise")
    if check.conclusion:
        res.failures += 1
        res.notes.append("support equality survived past the bound")
    if not math.isclose(err2, q2 / 2.0 + eps, rel_tol=1e-9):
        res.failures += 1
        res.notes.append(f"construction error {err2} != q^2/2 + eps")
    res.notes.append(f"error^2 = q^2/2 + {eps:g} breaks recovery as expected")
    return res


def topk_reference(v: np.ndarray, s: int) -> np.ndarray:
    """Quadratic pairwise-count reference for the hard threshold: keep entry i
    when fewer than s entries have strictly larger magnitude."""
    v = np.asarray(v)
    m2 = v.real**2 + v.imag**2
    out = np.zeros_like(v)
    for i in range(v.size):
        if int(np.count_nonzero(m2 > m2[i])) < s:
            out[i] = v[i]
    return out


def hard_threshold_oracle_suite(draws: int = 10_000, seed: int = 11) -> SuiteResult:
    """Agreement of hard_threshold with the pairwise-count reference on random
    complex vectors (N <= 12) plus engineered tie patterns."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("hard-threshold-oracle", 0, 0)
    cases = 0
    for _ in range(draws):
        n = int(rng.integers(1, 13))
        s = int(rng.integers(1, n + 1))
        kind = rng.integers(0, 3)
        if kind == 0:
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        elif kind == 1:
            # engineered ties: magnitudes drawn from a tiny exact set
            base = rng.choice([0.0, 1.0, 2.0], size=n)
            phase = rng.choice([1.0, -1.0, 1.0j, -1.0j], size=n)
            v = base * phase
        else:
            v = rng.standard_normal(n)  # real input
        cases += 1
        if not np.array_equal(hard_threshold(v, s), topk_reference(v, s)):
            res.failures += 1
    res.draws = cases
    return res


def sensing_identity_suite(n_max: int = 64, tol: float = 1e-12) -> SuiteResult:
    """(1/N) sum_t x(t) x(t)^H accumulated term by term must be the identity."""
    res = SuiteResult("sensing-identity", 0, 0)
    worst = 0.0
    for n in range(2, n_max + 1):
        acc = np.zeros((n, n), dtype=complex)
        for t in range(n):
            x = regressor_row(n, t)
            acc += np.outer(x, x.conj())
        dev = float(np.abs(acc / n - np.eye(n)).max())
        worst = max(worst, dev)
        res.draws += 1
        if dev >= tol:
            res.failures += 1
            res.notes.append(f"N={n}: max deviation {dev:.3e}")
    res.notes.append(f"worst deviation {worst:.3e} over N=2..{n_max}")
    return res


def sza_bias_suite(
    realizations: int = 500,
    n: int = 32,
    sines: int = 3,
    steps: int = 2000,
    mu_ref: float = 0.5,
    rho_over_mu: float = 0.05,
    snr_db: float = 20.0,
    seed: int = 17,
) -> SuiteResult:
    """Steady-state mean of the selective-attraction estimator.

    Averaged over noise realizations with a fixed sparse spectrum, the
    off-support bias magnitude must stay within rho/mu (plus Monte-Carlo
    slack) and the on-support bias must be statistically indistinguishable
    from zero, matching the limiting-mean fixed point of the update.
    """
    rng = np.random.default_rng(seed)
    bins = tuple(int(b) for b in rng.choice(np.arange(1, n // 2), size=sines, replace=False))
    spec = SignalSpec(n=n, sines=sines, bins=bins, snr_db=snr_db)
    z = multisine(spec)
    w_true = true_spectrum(spec)
    sigma = noise_std(signal_power(spec), snr_db)

    mu = mu_ref / n
    rho = rho_over_mu * mu
    m = 8  # keeps per-sample index draws uniform while batching the rng work
    windows = steps // m

    finals = np.empty((realizations, n), dtype=complex)
    for r in range(realizations):
        est = Estimator(EstimatorConfig("sza", mu=mu, rho=rho, s=2 * sines), n)
        sens = SensingConfig(n=n, m=m, mode=Windowed(windows), seed=seed + 1000 + r)
        for sample in make_stream(sens, itertools.repeat(z, windows), sigma):
            est.step(sample)
        finals[r] = est.state.w

    bias = finals.mean(axis=0) - w_true
    se = finals.std(axis=0) / math.sqrt(realizations)
    on = np.abs(w_true) > 0

    res = SuiteResult("sza-bias", realizations, 0)
    off_bound = rho / mu + 3.0 * se[~on]
    if not np.all(np.abs(bias[~on]) <= off_bound):
        res.failures += 1
        res.notes.append("off-support bias exceeded rho/mu + 3 SE")
    if not np.all(np.abs(bias[on]) <= 3.0 * se[on]):
        res.failures += 1
        res.notes.append("on-support bias CI excluded zero")
    res.notes.append(
        f"off-support max |bias| {np.abs(bias[~on]).max():.2e} (bound {rho / mu:.2e} + 3 SE), "
        f"on-support max |bias|/3SE "
        f"{(np.abs(bias[on]) / (3.0 * se[on])).max():.2f}"
    )
    return res


def roundtrip_suite(seed: int = 13, tol: float = 1e-10) -> SuiteResult:
    """The exact spectrum must regenerate the time signal through the rows."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("spectrum-roundtrip", 0, 0)
    for n, k in ((8, 1), (64, 3), (1000, 10)):
        bins = tuple(int(b) for b in rng.choice(np.arange(1, n // 2), size=k, replace=False))
        amps = tuple(float(a) for a in rng.uniform(0.5, 2.0, size=k))
        spec = SignalSpec(n=n, sines=k, bins=bins, amps=amps)
        z = multisine(spec)
        w = true_spectrum(spec)
        rebuilt = (fourier_rows(n) @ w.conj()).real
        dev = float(np.abs(rebuilt - z).max())
        res.draws += 1
        if dev >= tol:
            res.failures += 1
            res.notes.append(f"N={n}: max deviation {dev:.3e}")
    return res
