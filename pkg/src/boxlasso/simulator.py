"""Finite-size Monte-Carlo engine.

Each trial draws a channel, its imperfect estimate, a sparse transmit
vector, and receiver noise, then decodes with the Box-LASSO and records
the empirical figures of merit.  Trial t of a run seeded with `rng_seed`
uses an independent generator derived from (rng_seed, t), so results are
byte-identical for a given seed regardless of the execution schedule, and
two runs sharing a seed see identical randomness per trial (useful for
paired comparisons such as box vs. unconstrained decoding).

Channel models:

* "statistical" draws the estimate and the estimation error directly from
  their limiting joint law: independent Gaussians with variances
  sigma_h2 and sigma_w2, true channel = estimate - error.
* "explicit_pilot" runs the actual training phase: orthogonal pilots of
  length T_t >= n at power P_t, additive unit noise, linear MMSE channel
  estimate.  Statistically equivalent to "statistical".

A channel family override replaces the Gaussian law of the true channel
with another unit-variance family (rademacher, laplacian, or gaussian for
a like-for-like comparison); the estimation error stays Gaussian and the
estimate is formed as truth plus error.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .core import BoxBounds
from .errors import PilotRankError
from .priors import Prior
from .solver import BoxLassoProblem, SolverReport, solve_box_lasso

CHANNEL_FAMILIES = ("gaussian", "rademacher", "laplacian")


@dataclass
class ChannelRealization:
    h_true: np.ndarray
    h_est: np.ndarray
    est_error_var: float


@dataclass
class TransmissionInstance:
    signal: np.ndarray
    support: np.ndarray
    received: np.ndarray
    noise: np.ndarray


@dataclass(frozen=True)
class EmpiricalMetrics:
    mse: float
    mse_se: float
    residual: float
    residual_se: float
    psi_on: float
    psi_on_se: float
    psi_off: float
    psi_off_se: float
    eer: float
    eer_se: float
    objective: float
    objective_se: float
    trials: int


def _trial_rng(rng_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=(rng_seed, trial)))


def _family_draw(rng: np.random.Generator, family: str, shape) -> np.ndarray:
    if family == "gaussian":
        return rng.standard_normal(shape)
    if family == "rademacher":
        return rng.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
    if family == "laplacian":
        # scale 1/sqrt(2) gives unit variance
        return rng.laplace(0.0, 1.0 / math.sqrt(2.0), size=shape)
    raise ValueError(f"unknown channel family {family!r}")


def _draw_channel(
    cfg: SystemConfig,
    rng: np.random.Generator,
    mode: str,
    family: str | None,
) -> ChannelRealization:
    m, n = cfg.m, cfg.n
    if mode == "statistical":
        if family is None:
            h_est = rng.normal(0.0, math.sqrt(cfg.sigma_h2), size=(m, n))
            err = rng.normal(0.0, math.sqrt(cfg.sigma_w2), size=(m, n))
            return ChannelRealization(h_est - err, h_est, cfg.sigma_w2)
        h_true = _family_draw(rng, family, (m, n))
        err = rng.normal(0.0, math.sqrt(cfg.sigma_w2), size=(m, n))
        return ChannelRealization(h_true, h_true + err, cfg.sigma_w2)
    if mode == "explicit_pilot":
        if family is not None:
            raise ValueError("channel family override requires statistical mode")
        return _pilot_channel(cfg, rng)
    raise ValueError(f"unknown channel mode {mode!r}")


def _pilot_channel(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    m, n = cfg.m, cfg.n
    t_train = cfg.train_len
    if t_train < n:
        raise PilotRankError(
            f"orthogonal pilots need T_t >= n, got T_t = {t_train}, n = {n}"
        )
    p_t = cfg.p_train
    # rows of an orthogonal T_t x T_t matrix, scaled so S S^T = T_t I_n
    q, _ = np.linalg.qr(rng.standard_normal((t_train, n)))
    pilots = math.sqrt(t_train) * q.T
    h_true = rng.standard_normal((m, n))
    pilot_noise = rng.standard_normal((m, t_train))
    received = math.sqrt(p_t / n) * h_true @ pilots + pilot_noise
    gram = pilots @ pilots.T + (n / p_t) * np.eye(n)
    h_est = math.sqrt(n / p_t) * np.linalg.solve(gram, (received @ pilots.T).T).T
    return ChannelRealization(h_true, h_est, cfg.sigma_w2)


def generate_channel(
    cfg: SystemConfig,
    rng_seed: int,
    mode: str = "statistical",
    family: str | None = None,
) -> ChannelRealization:
    """Draw one channel/estimate pair; deterministic in rng_seed."""
    return _draw_channel(cfg, _trial_rng(rng_seed, 0), mode, family)


def _draw_signal(
    cfg: SystemConfig, prior: Prior, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    n, k = cfg.n, cfg.k
    if k < 1:
        raise ValueError("kappa * n rounds to zero active antennas")
    support = np.sort(rng.choice(n, size=k, replace=False))
    signal = np.zeros(n)
    signal[support] = prior.sample_nonzero(k, rng)
    return signal, support


def generate_gssk(
    cfg: SystemConfig,
    h_true: np.ndarray,
    rng_seed: int,
    prior: Prior | None = None,
) -> TransmissionInstance:
    """One transmit vector and its received frame over the given channel.

    The active set has exactly round(kappa n) entries chosen uniformly;
    active values come from the prior's nonzero part (unit amplitude by
    default, the plain GSSK constellation).
    """
    rng = _trial_rng(rng_seed, 0)
    prior = prior if prior is not None else Prior.sparse_bernoulli(cfg.kappa)
    signal, support = _draw_signal(cfg, prior, rng)
    noise = rng.standard_normal(cfg.m)
    received = math.sqrt(cfg.p_data / cfg.n) * h_true @ signal + noise
    return TransmissionInstance(signal, support, received, noise)


def _trial_metrics(
    cfg: SystemConfig,
    gamma: float,
    box: BoxBounds,
    zeta: float,
    prior: Prior,
    mode: str,
    family: str | None,
    rng_seed: int,
    trial: int,
    solver_tol: float,
    max_iter: int,
) -> tuple[float, ...]:
    rng = _trial_rng(rng_seed, trial)
    # signal and noise are drawn before the channel so runs differing only
    # in channel family (or box) share them trial for trial
    signal, support = _draw_signal(cfg, prior, rng)
    noise = rng.standard_normal(cfg.m)
    channel = _draw_channel(cfg, rng, mode, family)
    n = cfg.n
    received = math.sqrt(cfg.p_data / n) * channel.h_true @ signal + noise

    design = math.sqrt(cfg.p_data / n) * channel.h_est
    problem = BoxLassoProblem(design, received, gamma * cfg.p_data, box)
    report: SolverReport = solve_box_lasso(problem, tol=solver_tol, max_iter=max_iter)
    s_hat = report.solution

    err = s_hat - signal
    mse = float(err @ err) / n
    misfit = design @ s_hat - received
    residual = float(misfit @ misfit) / n
    objective = report.final_objective / n

    magnitude = np.abs(s_hat)
    on = magnitude[support]
    off_mask = np.ones(n, dtype=bool)
    off_mask[support] = False
    off = magnitude[off_mask]
    k = support.size
    hits = int((on >= zeta).sum())
    quiet = int((off <= zeta).sum())
    psi_on = hits / k
    psi_off = quiet / (n - k)
    eer = (k - hits) / k + (n - k - quiet) / (n - k)
    return mse, residual, psi_on, psi_off, eer, objective


def run_trials(
    cfg: SystemConfig,
    gamma: float,
    box: BoxBounds,
    zeta: float,
    trials: int,
    rng_seed: int,
    prior: Prior | None = None,
    mode: str = "statistical",
    family: str | None = None,
    threads: int = 1,
    solver_tol: float = 1e-9,
    max_iter: int = 20000,
) -> EmpiricalMetrics:
    """Average decoding metrics over independent trials.

    Aggregation always happens in trial order, so the result does not
    depend on `threads`.  Standard errors are sample std / sqrt(trials)
    (zero when trials == 1).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not zeta > 0.0:
        raise ValueError("zeta must be positive")
    prior = prior if prior is not None else Prior.sparse_bernoulli(cfg.kappa)

    def one(trial: int):
        return _trial_metrics(
            cfg, gamma, box, zeta, prior, mode, family,
            rng_seed, trial, solver_tol, max_iter,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, range(trials)))
    else:
        rows = [one(t) for t in range(trials)]

    data = np.asarray(rows)  # (trials, 6), fixed metric order

    def mean_se(col: int) -> tuple[float, float]:
        column = data[:, col]
        mean = float(column.mean())
        if trials < 2:
            return mean, 0.0
        return mean, float(column.std(ddof=1) / math.sqrt(trials))

    mse, mse_se = mean_se(0)
    residual, residual_se = mean_se(1)
    psi_on, psi_on_se = mean_se(2)
    psi_off, psi_off_se = mean_se(3)
    eer, eer_se = mean_se(4)
    objective, objective_se = mean_se(5)
    return EmpiricalMetrics(
        mse, mse_se, residual, residual_se, psi_on, psi_on_se,
        psi_off, psi_off_se, eer, eer_se, objective, objective_se, trials,
    )
