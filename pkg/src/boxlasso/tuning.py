"""Hyper-parameter selection on top of the asymptotic predictions.

All sweeps are theory-driven: each candidate point costs one scalar saddle
solve, so regularization, power split, and training length can be tuned
without Monte-Carlo runs.  Every 1-D search uses the same recipe, a fixed
coarse grid followed by golden-section refinement around the best cell,
which keeps results reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .core import BoxBounds
from .predictor import (
    ScalarSolution,
    predict_eer,
    predict_mse,
    predict_support_probs,
    solve_scalar,
)
from .priors import Prior

CRITERIA = ("mse", "eer", "weighted_support")

_GAMMA_GRID = np.geomspace(1e-3, 1e2, 25)
_NU_GRID = np.linspace(0.02, 0.98, 49)
_REFINE_TOL = 1e-4  # relative, on the argument
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepResult:
    grid: np.ndarray
    values: np.ndarray
    argopt: float
    opt_value: float
    at_boundary: bool
    sense: str  # "min" or "max"


def _criterion_value(
    cfg: SystemConfig,
    gamma: float,
    prior: Prior,
    box: BoxBounds,
    criterion: str,
    zeta: float,
    theta: float,
) -> float:
    """Scalar figure of merit at one gamma; lower is better (sign-flipped
    for maximization criteria)."""
    sol: ScalarSolution = solve_scalar(cfg, gamma, prior, box)
    if criterion == "mse":
        return predict_mse(sol, cfg)
    if criterion == "eer":
        # general form valid for any prior/box; reduces to the closed-form
        # element error rate for the unit-amplitude prior on [0, 1]
        psi_on, psi_off = predict_support_probs(sol, cfg, gamma, prior, box, zeta)
        return 2.0 - psi_on - psi_off
    if criterion == "weighted_support":
        psi_on, psi_off = predict_support_probs(sol, cfg, gamma, prior, box, zeta)
        return -(theta * psi_on + (1.0 - theta) * psi_off)
    raise ValueError(f"unknown criterion {criterion!r}")


def _golden_refine(f, lo: float, hi: float) -> tuple[float, float]:
    """Golden-section minimum on [lo, hi] to relative argument tolerance."""
    a, b = lo, hi
    tol = _REFINE_TOL * max(abs(a), abs(b), 1e-30)
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
    return (c, fc) if fc < fd else (d, fd)


def _grid_then_refine(f, grid: np.ndarray, log_space: bool) -> SweepResult:
    """Minimize f over the grid hull: coarse scan plus local refinement.

    The refined result is never worse than the best grid point.  Sweep
    values are stored as evaluated (before any sign conventions applied by
    callers).
    """
    values = np.asarray([f(x) for x in grid])
    best = int(np.argmin(values))
    at_boundary = best in (0, len(grid) - 1)
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    if log_space:
        x_ref, v_ref = _golden_refine(lambda t: f(math.exp(t)), math.log(lo), math.log(hi))
        x_ref = math.exp(x_ref)
    else:
        x_ref, v_ref = _golden_refine(f, lo, hi)
    if v_ref <= values[best]:
        argopt, opt_value = float(x_ref), float(v_ref)
    else:
        argopt, opt_value = float(grid[best]), float(values[best])
    return SweepResult(grid.copy(), values, argopt, opt_value, at_boundary, "min")


def _with_sense(result: SweepResult, sense: str) -> SweepResult:
    if sense == "min":
        return result
    return SweepResult(
        result.grid,
        -result.values,
        result.argopt,
        -result.opt_value,
        result.at_boundary,
        "max",
    )


def optimal_gamma(
    cfg: SystemConfig,
    prior: Prior,
    box: BoxBounds,
    criterion: str = "mse",
    zeta: float = 0.1,
    theta: float = 0.5,
) -> SweepResult:
    """Tune the regularization weight against an asymptotic criterion.

    criterion: "mse" or "eer" (minimized), or "weighted_support"
    (maximizes theta psi_on + (1 - theta) psi_off at threshold zeta).
    The grid is fixed (25 log-spaced points on [1e-3, 1e2]); an optimum on
    the grid edge is flagged via at_boundary.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    if criterion in ("eer", "weighted_support") and not 0.0 < zeta:
        raise ValueError("zeta must be positive")
    if criterion == "weighted_support" and not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")

    def f(gamma: float) -> float:
        return _criterion_value(cfg, gamma, prior, box, criterion, zeta, theta)

    result = _grid_then_refine(f, _GAMMA_GRID, log_space=True)
    return _with_sense(result, "max" if criterion == "weighted_support" else "min")


def optimal_power_allocation(
    cfg: SystemConfig,
    prior: Prior,
    box: BoxBounds,
    criterion: str = "mse",
    zeta: float = 0.01,
    theta: float = 0.5,
) -> SweepResult:
    """Tune the data/training power split nu; gamma is re-tuned per point.

    Each sweep value is the criterion at its own optimal regularization,
    so the result is the best achievable figure of merit at that split.
    """

    def f(nu: float) -> float:
        inner = optimal_gamma(cfg.with_nu(nu), prior, box, criterion, zeta, theta)
        return inner.opt_value if inner.sense == "min" else -inner.opt_value

    result = _grid_then_refine(f, _NU_GRID, log_space=False)
    return _with_sense(result, "max" if criterion == "weighted_support" else "min")


def closed_form_nu(cfg: SystemConfig) -> float:
    """Power split minimizing the effective decoding noise, in closed form.

    Valid for the Box-LASSO with the orthogonal-pilot estimate; depends on
    the budget only through P tau and the data length tau_d = tau - tau_t.

    theta = (1 + P tau) / (P tau (1 - 1/tau_d)); the optimizer is
    theta - sqrt(theta (theta - 1)) for tau_d > 1, 1/2 at tau_d = 1, and
    theta + sqrt(theta (theta - 1)) for tau_d < 1.
    """
    return _closed_form_nu(cfg.total_power, cfg.tau, cfg.tau_d)


def _closed_form_nu(power: float, tau: float, tau_d: float) -> float:
    if tau_d <= 0.0:
        raise ValueError("tau_d must be positive")
    if tau_d == 1.0:
        return 0.5
    p_tau = power * tau
    theta = (1.0 + p_tau) / (p_tau * (1.0 - 1.0 / tau_d))
    root = math.sqrt(theta * (theta - 1.0))
    return theta - root if tau_d > 1.0 else theta + root


def optimal_training(
    cfg: SystemConfig,
    prior: Prior,
    box: BoxBounds,
    zeta: float = 0.01,
    grid_points: int = 13,
) -> SweepResult:
    """Sweep the training length tau_t in [1, tau) to maximize goodput.

    The element error rate at each tau_t uses its own tuned gamma.  The
    sweep includes tau_t = 1 exactly (the shortest admissible training).
    """
    grid = np.linspace(1.0, cfg.tau, num=grid_points, endpoint=False)

    def f(tau_t: float) -> float:
        local = cfg.with_tau_t(tau_t)
        inner = optimal_gamma(local, prior, box, "eer", zeta)
        goodput = (1.0 - tau_t / cfg.tau) * (1.0 - inner.opt_value)
        return -goodput

    result = _grid_then_refine(f, grid, log_space=False)
    return _with_sense(result, "max")
