"""Scalar building blocks for box-constrained soft thresholding.

The central object is the saturated shrinkage operator

    H(a; gamma, l, u) = argmin_{l <= s <= u}  (1/2) (s - a)^2 + gamma |s|,

i.e. the proximal operator of gamma|.| restricted to a box [l, u] with
l <= 0 <= u.  Both the minimizer and the attained minimum split into five
affine/quadratic pieces; the piece boundaries (l - gamma, -gamma, gamma,
u + gamma) are reused all over the asymptotic analysis, so they are kept
explicit here instead of being re-derived downstream.

Also provided: the Gaussian tail function Q and the zeroth/first/second
moments of a standard normal restricted to an interval, which are the
primitives for integrating piecewise quadratics against a Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class BoxBounds:
    """Feasible interval [lower, upper] with lower <= 0 <= upper.

    Infinite endpoints are allowed; BoxBounds(-inf, inf) recovers the
    unconstrained (standard LASSO) setting.
    """

    lower: float
    upper: float

    def __post_init__(self):
        lo = float(self.lower)
        hi = float(self.upper)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("box bounds must not be NaN")
        if lo > 0.0 or hi < 0.0:
            raise ValueError(f"box must contain 0: got [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    @property
    def unconstrained(self) -> bool:
        return math.isinf(self.lower) and math.isinf(self.upper)


#: Standard LASSO feasible set.
UNBOUNDED_BOX = BoxBounds(-math.inf, math.inf)


def saturated_shrinkage(a: float, gamma: float, box: BoxBounds) -> float:
    """Soft threshold `a` by `gamma` and saturate at the box edges.

    Five regimes depending on where `a` falls relative to the thresholds:
    saturation at the upper edge, positive shrinkage, the dead zone around
    zero, negative shrinkage, saturation at the lower edge.
    """
    if gamma < 0.0 or math.isnan(gamma):
        raise ValueError("gamma must be >= 0")
    lo, hi = box.lower, box.upper
    if a >= hi + gamma:
        return hi
    if a > gamma:
        return a - gamma
    if a >= -gamma:
        return 0.0
    if a > lo - gamma:
        return a + gamma
    return lo


def shrinkage_objective(a: float, gamma: float, box: BoxBounds) -> float:
    """Minimum of (1/2)(s - a)^2 + gamma|s| over the box.

    Piecewise quadratic in `a`, continuous across all five pieces, and equal
    to plugging saturated_shrinkage(a) back into the objective.
    """
    if gamma < 0.0 or math.isnan(gamma):
        raise ValueError("gamma must be >= 0")
    lo, hi = box.lower, box.upper
    if a >= hi + gamma:
        return 0.5 * (hi - a) ** 2 + gamma * hi
    if a > gamma:
        return gamma * a - 0.5 * gamma * gamma
    if a >= -gamma:
        return 0.5 * a * a
    if a > lo - gamma:
        return -gamma * a - 0.5 * gamma * gamma
    return 0.5 * (lo - a) ** 2 - gamma * lo


def q_function(x):
    """Gaussian tail probability Q(x) = P[N(0,1) > x].

    Accepts scalars or arrays; evaluated through erfc for full relative
    accuracy in the far tail.
    """
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / _SQRT2)


def normal_pdf(x):
    """Standard normal density, vectorized."""
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def _q(x: float) -> float:
    # scalar fast path used by the saddle-point inner loops
    return 0.5 * math.erfc(x / _SQRT2)


def _phi(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def _xphi(x: float) -> float:
    # x * pdf(x) with the correct 0 limit at +-inf
    if math.isinf(x):
        return 0.0
    return x * _INV_SQRT_2PI * math.exp(-0.5 * x * x)


@dataclass(frozen=True)
class TruncatedGaussianMoments:
    """Moments of Z ~ N(0,1) restricted to [t1, t2] (not renormalized)."""

    m0: float
    m1: float
    m2: float


def truncated_moments(t1: float, t2: float) -> TruncatedGaussianMoments:
    """E[Z^p ; t1 <= Z <= t2] for p = 0, 1, 2 and Z standard normal.

    m0 = Q(t1) - Q(t2)
    m1 = phi(t1) - phi(t2)
    m2 = m0 + t1 phi(t1) - t2 phi(t2)

    Infinite endpoints are fine; t1 > t2 is an error.
    """
    if math.isnan(t1) or math.isnan(t2):
        raise ValueError("endpoints must not be NaN")
    if t1 > t2:
        raise ValueError(f"need t1 <= t2, got ({t1}, {t2})")
    m0 = _q(t1) - _q(t2)
    m1 = _phi(t1) - _phi(t2)
    m2 = m0 + _xphi(t1) - _xphi(t2)
    return TruncatedGaussianMoments(m0, m1, m2)
