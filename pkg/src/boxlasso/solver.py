"""Box-LASSO solver: accelerated proximal gradient with adaptive restart.

The decoding problem is

    min_{l <= s <= u}  || A s - r ||^2  +  gamma_scaled * || s ||_1,

whose proximal operator is exactly the saturated shrinkage from `core`
(soft threshold then clip to the box).  The smooth part has Lipschitz
gradient with constant 2 sigma_max(A)^2; the step is fixed from a power
iteration estimate of the spectral norm, and Nesterov momentum is reset
whenever the objective rises, which keeps the objective monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import BoxBounds
from .errors import DimensionMismatch


@dataclass
class BoxLassoProblem:
    design: np.ndarray
    observation: np.ndarray
    gamma_scaled: float
    box: BoxBounds

    def __post_init__(self):
        self.design = np.asarray(self.design, dtype=float)
        self.observation = np.asarray(self.observation, dtype=float)
        if self.design.ndim != 2:
            raise DimensionMismatch("design must be a 2-D array")
        if self.observation.shape != (self.design.shape[0],):
            raise DimensionMismatch(
                f"observation shape {self.observation.shape} does not match "
                f"design rows {self.design.shape[0]}"
            )
        if not np.all(np.isfinite(self.design)) or not np.all(
            np.isfinite(self.observation)
        ):
            raise ValueError("design and observation must be finite")
        if not (math.isfinite(self.gamma_scaled) and self.gamma_scaled >= 0.0):
            raise ValueError("gamma_scaled must be finite and >= 0")

    @property
    def dim(self) -> int:
        return self.design.shape[1]

    def objective(self, s: np.ndarray) -> float:
        misfit = self.design @ s - self.observation
        return float(misfit @ misfit + self.gamma_scaled * np.abs(s).sum())


@dataclass
class SolverReport:
    solution: np.ndarray
    iterations: int
    final_objective: float
    kkt_residual: float
    converged: bool
    objective_trace: np.ndarray = field(repr=False, default=None)


def _prox(v: np.ndarray, thresh: float, box: BoxBounds) -> np.ndarray:
    # soft threshold, then clip: equals the elementwise saturated shrinkage
    shrunk = np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)
    return np.clip(shrunk, box.lower, box.upper)


def spectral_norm_sq(a: np.ndarray, rel_tol: float = 1e-6, max_iter: int = 1000) -> float:
    """Largest squared singular value of `a` by power iteration on A^T A."""
    n = a.shape[1]
    v = np.full(n, 1.0 / math.sqrt(n))
    rho = 0.0
    for _ in range(max_iter):
        w = a.T @ (a @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        rho_new = float(v @ (a.T @ (a @ v)))
        if abs(rho_new - rho) <= rel_tol * rho_new:
            return rho_new
        rho = rho_new
    return rho


def solve_box_lasso(
    problem: BoxLassoProblem,
    tol: float = 1e-9,
    max_iter: int = 20000,
    keep_trace: bool = False,
) -> SolverReport:
    """Minimize the box-constrained LASSO objective.

    Terminates when the relative objective change drops below `tol` and the
    proximal-gradient fixed-point residual (sup norm) is below 10 * tol.
    Hitting `max_iter` returns the best iterate with converged = False.
    """
    a = problem.design
    r = problem.observation
    box = problem.box
    n = problem.dim

    lip = 2.0 * spectral_norm_sq(a) * (1.0 + 1e-3)  # small margin over the estimate
    if lip == 0.0:
        # zero design: the penalty (or the box) pins the solution at 0
        x = np.zeros(n)
        obj = problem.objective(x)
        return SolverReport(x, 0, obj, 0.0, True, np.asarray([obj]))
    step = 1.0 / lip
    thresh = step * problem.gamma_scaled

    def grad(s):
        return 2.0 * (a.T @ (a @ s - r))

    x = np.zeros(n)
    y = x
    t_mom = 1.0
    f_x = problem.objective(x)
    trace = [f_x] if keep_trace else None

    iterations = 0
    converged = False
    kkt = math.inf
    for iterations in range(1, max_iter + 1):
        x_new = _prox(y - step * grad(y), thresh, box)
        f_new = problem.objective(x_new)
        if f_new > f_x:
            # momentum overshoot: fall back to a plain descent step from x
            x_new = _prox(x - step * grad(x), thresh, box)
            f_new = problem.objective(x_new)
            t_mom = 1.0
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_mom * t_mom))
        y = x_new + ((t_mom - 1.0) / t_next) * (x_new - x)
        rel_change = abs(f_new - f_x) / max(1.0, abs(f_x))
        x, f_x, t_mom = x_new, f_new, t_next
        if trace is not None:
            trace.append(f_x)
        if rel_change < tol:
            kkt = float(np.max(np.abs(x - _prox(x - step * grad(x), thresh, box))))
            if kkt <= 10.0 * tol:
                converged = True
                break
    if math.isinf(kkt):
        kkt = float(np.max(np.abs(x - _prox(x - step * grad(x), thresh, box))))
    return SolverReport(
        solution=x,
        iterations=iterations,
        final_objective=f_x,
        kkt_residual=kkt,
        converged=converged,
        objective_trace=np.asarray(trace) if trace is not None else None,
    )


def brute_force_oracle(
    problem: BoxLassoProblem, grid_points: int = 25
) -> tuple[np.ndarray, float]:
    """Exhaustive grid minimizer for low-dimensional sanity checks.

    Enumerates a uniform grid of `grid_points` per coordinate over the box
    (infinite edges clipped to [-3, 3]) and returns the best grid point and
    its objective.  Only sensible for problem.dim <= 6.
    """
    n = problem.dim
    if n > 6:
        raise ValueError("brute force oracle is limited to dim <= 6")
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    lo = max(problem.box.lower, -3.0)
    hi = min(problem.box.upper, 3.0)
    axis = np.linspace(lo, hi, grid_points)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    candidates = np.stack([m.ravel() for m in mesh], axis=1)

    best_val = math.inf
    best = None
    chunk = 200_000
    for start in range(0, candidates.shape[0], chunk):
        block = candidates[start : start + chunk]
        misfit = block @ problem.design.T - problem.observation
        vals = np.einsum("ij,ij->i", misfit, misfit)
        vals += problem.gamma_scaled * np.abs(block).sum(axis=1)
        idx = int(np.argmin(vals))
        if vals[idx] < best_val:
            best_val = float(vals[idx])
            best = block[idx].copy()
    return best, best_val


def gssk_map(s_hat: np.ndarray, k: int) -> np.ndarray:
    """Snap a relaxed solution to a k-sparse 0/1 antenna activity pattern.

    The k largest entries are set to 1 (ties resolved toward the lower
    index), the rest to 0.
    """
    s_hat = np.asarray(s_hat, dtype=float)
    if s_hat.ndim != 1:
        raise DimensionMismatch("s_hat must be a vector")
    if not 1 <= k <= s_hat.size:
        raise ValueError(f"k must lie in [1, {s_hat.size}]")
    order = np.argsort(-s_hat, kind="stable")
    out = np.zeros(s_hat.size)
    out[order[:k]] = 1.0
    return out
