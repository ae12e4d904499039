"""Asymptotic performance predictions for the Box-LASSO decoder.

The high-dimensional decoding problem concentrates, as m, n grow with the
ratios fixed, on a deterministic two-scalar saddle problem

    max_{beta > 0} min_{lambda > 0} G(beta, lambda),

with G built from the system ratios, the regularization weight gamma, the
signal prior, and the feasible box.  The function is concave in beta and
convex in lambda, so the saddle is located by nested golden-section
searches with automatic bracket expansion.  All performance metrics (mean
square error, residual, normalized optimal cost, support detection
probabilities, element error rate, goodput) are closed-form functions of
the saddle point (beta*, lambda*).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .core import BoxBounds, _q
from .errors import InconsistentSolution, NoInteriorOptimum
from .expectations import expected_J
from .priors import GAUSSIAN, Prior, gauss_hermite_normal

# golden-section argument tolerance and bracket policy (fixed by design so
# that solves are reproducible across callers)
_GOLDEN_TOL = 1e-9
_BRACKET_LO = 1e-3
_BRACKET_HI = 1e3
_BRACKET_CAP_LO = 1e-6
_BRACKET_CAP_HI = 1e6
_EXPAND = 10.0
_SCAN_POINTS = 13

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScalarSolution:
    """Saddle point of the scalar max-min problem and its diagnostics.

    signal_energy records the per-dimension signal second moment E[S0^2]
    the saddle was solved under; the error predictions reuse it so they
    stay consistent with the solve.
    """

    beta_star: float
    lambda_star: float
    objective: float
    stationarity_residual: float
    signal_energy: float


def scalar_objective(
    beta: float,
    lam: float,
    cfg: SystemConfig,
    gamma: float,
    prior: Prior,
    box: BoxBounds,
) -> float:
    """The scalarized max-min objective G(beta, lambda).

    Requires beta > 0, lambda > 0, gamma >= 0.  The expectation term blurs
    the prior with noise scale 1 / (lambda sqrt(eta P_d sigma_h2)) and
    thresholds at gamma / (beta lambda sqrt(eta) sigma_h2).
    """
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    if not lam > 0.0:
        raise ValueError("lambda must be positive")
    if gamma < 0.0:
        raise ValueError("gamma must be >= 0")
    sqrt_eta = math.sqrt(cfg.eta)
    p_d = cfg.p_data
    s_w2 = cfg.sigma_w2
    s_h2 = cfg.sigma_h2
    c1 = 1.0 / (lam * math.sqrt(cfg.eta * p_d * s_h2))
    c2 = gamma / (beta * lam * sqrt_eta * s_h2)
    mean_j = expected_J(c1, c2, prior, box)
    # effective noise adds the estimation error excited by the actual
    # per-dimension signal energy E[S0^2] (= kappa for unit nonzero energy)
    return (
        beta * sqrt_eta / (2.0 * lam)
        + 0.5 * beta * lam * sqrt_eta * (1.0 + prior.second_moment * p_d * s_w2)
        - 0.25 * beta * beta
        - beta / (2.0 * lam * sqrt_eta)
        + beta * lam * sqrt_eta * p_d * s_h2 * mean_j
    )


# ---------------------------------------------------------------------------
# 1-D search machinery


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of a unimodal f on [lo, hi]."""
    a, b = lo, hi
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    steps = max(1, int(math.ceil(math.log(tol / h) / math.log(_INV_PHI))))
    c = b - _INV_PHI * h
    d = a + _INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc < fd:
            b, d, fd = d, c, fc
            h *= _INV_PHI
            c = b - _INV_PHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def _minimize_positive(
    f,
    lo: float = _BRACKET_LO,
    hi: float = _BRACKET_HI,
    label: str = "variable",
) -> tuple[float, float]:
    """Minimize a unimodal f over (0, inf) by scan + golden section.

    The initial bracket [lo, hi] is scanned on a log grid; if the best
    point sits on an edge the bracket is expanded by a factor of 10 on that
    side, up to the caps [1e-6, 1e6].  NoInteriorOptimum is raised when the
    caps are reached with the optimum still on the edge.
    """
    lo = float(lo)
    hi = float(hi)
    while True:
        grid = np.geomspace(lo, hi, _SCAN_POINTS)
        vals = [f(x) for x in grid]
        best = int(np.argmin(vals))
        if best == 0:
            if lo <= _BRACKET_CAP_LO * (1.0 + 1e-12):
                raise NoInteriorOptimum(
                    f"no interior optimum in {label} within [{_BRACKET_CAP_LO}, {_BRACKET_CAP_HI}]"
                )
            lo = max(lo / _EXPAND, _BRACKET_CAP_LO)
            continue
        if best == _SCAN_POINTS - 1:
            if hi >= _BRACKET_CAP_HI * (1.0 - 1e-12):
                raise NoInteriorOptimum(
                    f"no interior optimum in {label} within [{_BRACKET_CAP_LO}, {_BRACKET_CAP_HI}]"
                )
            hi = min(hi * _EXPAND, _BRACKET_CAP_HI)
            continue
        return _golden_min(f, grid[best - 1], grid[best + 1], _GOLDEN_TOL)


# ---------------------------------------------------------------------------
# saddle solve


def _validate_saddle_inputs(cfg: SystemConfig, gamma: float, box: BoxBounds) -> None:
    if gamma < 0.0 or math.isnan(gamma):
        raise ValueError("gamma must be >= 0")
    if gamma == 0.0 and box.unconstrained and cfg.eta < 1.0:
        raise ValueError(
            "gamma = 0 with an unbounded box and eta < 1 has no unique minimizer"
        )


def solve_scalar(
    cfg: SystemConfig,
    gamma: float,
    prior: Prior,
    box: BoxBounds,
    tol: float = 1e-6,
    bracket_beta: tuple[float, float] | None = None,
    bracket_lambda: tuple[float, float] | None = None,
) -> ScalarSolution:
    """Locate the saddle point of the scalar objective.

    Outer golden-section maximization over beta wraps an inner minimization
    over lambda.  Stationarity of the result is verified by a central
    finite-difference gradient; the norm, relative to max(1, |G|), must not
    exceed 10 * tol or InconsistentSolution is raised.
    """
    _validate_saddle_inputs(cfg, gamma, box)
    b_lo, b_hi = bracket_beta if bracket_beta else (_BRACKET_LO, _BRACKET_HI)
    l_lo, l_hi = bracket_lambda if bracket_lambda else (_BRACKET_LO, _BRACKET_HI)

    def inner(beta: float) -> tuple[float, float]:
        return _minimize_positive(
            lambda lam: scalar_objective(beta, lam, cfg, gamma, prior, box),
            l_lo,
            l_hi,
            label="lambda",
        )

    def neg_value(beta: float) -> float:
        # for beta far from the saddle the inner infimum can escape to the
        # lambda boundary (value -inf); such beta cannot carry the saddle
        try:
            return -inner(beta)[1]
        except NoInteriorOptimum:
            return math.inf

    beta_star, _ = _minimize_positive(neg_value, b_lo, b_hi, label="beta")
    lambda_star, value = inner(beta_star)

    resid = _stationarity_residual(beta_star, lambda_star, value, cfg, gamma, prior, box)
    if not resid <= 10.0 * tol:
        raise InconsistentSolution(
            f"saddle stationarity residual {resid:.3e} exceeds {10.0 * tol:.3e}"
        )
    return ScalarSolution(beta_star, lambda_star, value, resid, prior.second_moment)


def _stationarity_residual(
    beta: float,
    lam: float,
    value: float,
    cfg: SystemConfig,
    gamma: float,
    prior: Prior,
    box: BoxBounds,
) -> float:
    """Central finite-difference gradient norm, relative to max(1, |G|)."""

    def g(b, l):
        return scalar_objective(b, l, cfg, gamma, prior, box)

    hb = 1e-5 * max(1.0, abs(beta))
    hl = 1e-5 * max(1.0, abs(lam))
    hl = min(hl, 0.5 * lam)  # keep lambda positive
    hb = min(hb, 0.5 * beta)
    d_beta = (g(beta + hb, lam) - g(beta - hb, lam)) / (2.0 * hb)
    d_lam = (g(beta, lam + hl) - g(beta, lam - hl)) / (2.0 * hl)
    return math.hypot(d_beta, d_lam) / max(1.0, abs(value))


def solve_scalar_multistart(
    cfg: SystemConfig,
    gamma: float,
    prior: Prior,
    box: BoxBounds,
    tol: float = 1e-6,
    starts: int = 10,
    rng_seed: int = 0,
    agreement_rtol: float = 1e-6,
) -> ScalarSolution:
    """solve_scalar from randomized initial brackets; all runs must agree.

    The saddle is unique for valid configurations; disagreement beyond
    `agreement_rtol` (relative, on beta* and lambda*) raises
    InconsistentSolution as a diagnostic.
    """
    base = solve_scalar(cfg, gamma, prior, box, tol)
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    for _ in range(max(0, starts - 1)):
        centers = 10.0 ** rng.uniform(-2.0, 2.0, size=2)
        sol = solve_scalar(
            cfg,
            gamma,
            prior,
            box,
            tol,
            bracket_beta=(centers[0] / 30.0, centers[0] * 30.0),
            bracket_lambda=(centers[1] / 30.0, centers[1] * 30.0),
        )
        db = abs(sol.beta_star - base.beta_star) / max(1e-12, abs(base.beta_star))
        dl = abs(sol.lambda_star - base.lambda_star) / max(1e-12, abs(base.lambda_star))
        if db > agreement_rtol or dl > agreement_rtol:
            raise InconsistentSolution(
                f"multi-start disagreement: d(beta)={db:.3e}, d(lambda)={dl:.3e}"
            )
    return base


# ---------------------------------------------------------------------------
# performance metrics at the saddle


def predict_mse(sol: ScalarSolution, cfg: SystemConfig) -> float:
    """Asymptotic per-entry mean square error of the decoder output."""
    raw = (
        1.0 / sol.lambda_star**2 - 1.0 - sol.signal_energy * cfg.p_data * cfg.sigma_w2
    ) / (cfg.p_data * cfg.sigma_h2)
    if raw < -1e-12:
        raise InconsistentSolution(f"negative predicted MSE: {raw:.3e}")
    return max(raw, 0.0)


def predict_residual(sol: ScalarSolution) -> float:
    """Asymptotic normalized residual ||A s_hat - r||^2 / n."""
    return 0.25 * sol.beta_star**2


def predict_objective(sol: ScalarSolution) -> float:
    """Asymptotic normalized optimal cost of the decoding problem."""
    return sol.objective


def _shrinkage_scales(
    sol: ScalarSolution, cfg: SystemConfig, gamma: float
) -> tuple[float, float]:
    """(noise scale sigma, threshold h) of the asymptotic per-entry channel."""
    sigma = 1.0 / (sol.lambda_star * math.sqrt(cfg.eta * cfg.p_data * cfg.sigma_h2))
    thresh = gamma / (sol.beta_star * sol.lambda_star * math.sqrt(cfg.eta) * cfg.sigma_h2)
    return sigma, thresh


def _detect_prob(s0: float, zeta: float, sigma: float, h: float, box: BoxBounds) -> float:
    """P[|H(s0 + sigma Z; h, box)| >= zeta] for one signal value."""
    p = 0.0
    if zeta <= box.upper:
        p += _q((zeta + h - s0) / sigma)
    if zeta <= -box.lower:
        p += _q((zeta + h + s0) / sigma)
    return p


def predict_support_probs(
    sol: ScalarSolution,
    cfg: SystemConfig,
    gamma: float,
    prior: Prior,
    box: BoxBounds,
    zeta: float,
) -> tuple[float, float]:
    """Asymptotic (psi_on, psi_off) support detection probabilities.

    psi_on is the probability that an on-support entry survives the
    threshold zeta, averaged over the nonzero part of the prior; psi_off
    the probability that an off-support entry stays below it.  The
    saturated shrinkage map is inverted piece by piece, so each term is an
    exact Gaussian tail.
    """
    if not zeta > 0.0:
        raise ValueError("zeta must be positive")
    if prior.sparsity == 0.0:
        raise ValueError("psi_on needs a prior with nonzero support mass")
    sigma, h = _shrinkage_scales(sol, cfg, gamma)

    if prior.discrete:
        psi_on = _detect_prob(prior.amplitude, zeta, sigma, h, box)
    elif prior.kind == GAUSSIAN:
        z, w = gauss_hermite_normal()
        scale = math.sqrt(prior.variance)
        psi_on = float(
            sum(wi * _detect_prob(scale * zi, zeta, sigma, h, box) for zi, wi in zip(z, w))
        )
    else:  # pragma: no cover - Prior restricts kinds
        raise ValueError(f"unsupported prior kind {prior.kind!r}")

    psi_off = 1.0
    if zeta < box.upper:
        psi_off -= _q((zeta + h) / sigma)
    if zeta < -box.lower:
        psi_off -= _q((zeta + h) / sigma)
    return psi_on, psi_off


def support_probs_bernoulli(
    sol: ScalarSolution,
    cfg: SystemConfig,
    gamma: float,
    amplitude: float,
    zeta: float,
) -> tuple[float, float]:
    """Closed-form (psi_on, psi_off) for the 0/amplitude prior on [0, amplitude].

    Direct Gaussian-tail expressions; must agree with the general
    region-inversion path to floating-point accuracy.
    """
    if not 0.0 < zeta < amplitude:
        raise ValueError("zeta must lie in (0, amplitude)")
    x = sol.lambda_star * math.sqrt(cfg.eta * cfg.p_data * cfg.sigma_h2)
    y = gamma * math.sqrt(cfg.p_data) / (sol.beta_star * math.sqrt(cfg.sigma_h2))
    psi_on = _q((zeta - amplitude) * x + y)
    psi_off = 1.0 - _q(zeta * x + y)
    return psi_on, psi_off


def predict_eer(
    sol: ScalarSolution, cfg: SystemConfig, gamma: float, zeta: float
) -> float:
    """Asymptotic element error rate for unit-amplitude sparse signals.

    Sum of the on-support miss rate and the off-support false-alarm rate at
    detection threshold zeta; equals 2 - psi_on - psi_off for the
    unit-amplitude prior on the [0, 1] box.
    """
    if not 0.0 < zeta < 1.0:
        raise ValueError("zeta must lie in (0, 1)")
    x = sol.lambda_star * math.sqrt(cfg.eta * cfg.p_data * cfg.sigma_h2)
    y = gamma * math.sqrt(cfg.p_data) / (sol.beta_star * math.sqrt(cfg.sigma_h2))
    return _q((1.0 - zeta) * x - y) + _q(zeta * x + y)


def predict_goodput(cfg: SystemConfig, eer: float) -> float:
    """Fraction of the frame carrying correctly detected payload.

    Training eats tau_t / tau of the frame; the rest is discounted by the
    element error rate.
    """
    if not 0.0 <= eer <= 2.0:
        raise ValueError("eer must lie in [0, 2]")
    return (1.0 - cfg.tau_t / cfg.tau) * (1.0 - eer)
