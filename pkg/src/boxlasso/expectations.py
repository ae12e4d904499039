"""Gaussian averages of the shrinkage objective.

The scalarized analysis needs E[J(S0 + c1 Z; c2, l, u)] with Z standard
normal, S0 drawn from the signal prior, and J the box soft-threshold
objective from `core`.  J is piecewise quadratic in its first argument, so
for a fixed S0 = s the average is an exact finite sum of truncated Gaussian
moments: split the real line at the four piece boundaries, map them to
z-coordinates, and integrate each quadratic piece against the restricted
normal.  Discrete priors then reduce to a weighted sum over atoms; the
sparse Gaussian prior wraps the same closed form in a Gauss-Hermite rule
over the nonzero part.
"""

from __future__ import annotations

import math

from .core import BoxBounds, _phi, _q, _xphi
from .priors import GAUSSIAN, Prior, gauss_hermite_normal

_GH_NODES = 64


def _gaussian_mean_J(s0: float, c1: float, c2: float, lo: float, hi: float) -> float:
    """E_Z[J(s0 + c1 Z; c2, lo, hi)] by exact piecewise integration.

    Each piece of J is A a^2 + B a + C; with a = s0 + c1 z the piece
    contributes A c1^2 m2 + c1 (2 A s0 + B) m1 + (A s0^2 + B s0 + C) m0
    where m0, m1, m2 are moments of Z restricted to the piece's z-interval.
    Boundary tails/densities are computed once and shared by the adjacent
    pieces; this function sits in the innermost loop of the saddle solve.
    """
    inv = 1.0 / c1
    half_c1sq = 0.5 * c1 * c1
    # dead zone |a| <= c2: quadratic a^2/2
    t1 = (-c2 - s0) * inv
    t2 = (c2 - s0) * inv
    q1, p1 = _q(t1), _phi(t1)
    q2, p2 = _q(t2), _phi(t2)
    m0 = q1 - q2
    total = half_c1sq * (m0 + t1 * p1 - t2 * p2) + c1 * s0 * (p1 - p2) + 0.5 * s0 * s0 * m0

    # upper side: linear piece gamma*a - c2^2/2, then saturation at hi
    if math.isfinite(hi):
        t3 = (hi + c2 - s0) * inv
        q3, p3 = _q(t3), _phi(t3)
        total += c1 * c2 * (p2 - p3) + (c2 * s0 - 0.5 * c2 * c2) * (q2 - q3)
        d_hi = s0 - hi
        total += (
            half_c1sq * (q3 + t3 * p3)
            + c1 * d_hi * p3
            + (0.5 * d_hi * d_hi + c2 * hi) * q3
        )
    else:
        total += c1 * c2 * p2 + (c2 * s0 - 0.5 * c2 * c2) * q2

    # lower side, mirrored
    if math.isfinite(lo):
        t0 = (lo - c2 - s0) * inv
        q0, p0 = _q(t0), _phi(t0)
        total += -c1 * c2 * (p0 - p1) - (c2 * s0 + 0.5 * c2 * c2) * (q0 - q1)
        d_lo = s0 - lo
        cdf0 = 1.0 - q0
        total += (
            half_c1sq * (cdf0 - t0 * p0)
            - c1 * d_lo * p0
            + (0.5 * d_lo * d_lo - c2 * lo) * cdf0
        )
    else:
        total += c1 * c2 * p1 - (c2 * s0 + 0.5 * c2 * c2) * (1.0 - q1)
    return total


def expected_J(c1: float, c2: float, prior: Prior, box: BoxBounds) -> float:
    """E[J(S0 + c1 Z; c2, box)] over S0 ~ prior and independent Z ~ N(0,1).

    c1 is the Gaussian blur scale (must be finite and positive), c2 the
    effective threshold (finite, >= 0; zero is the pure box-projection
    limit).  Discrete priors are integrated exactly; the sparse Gaussian
    prior uses a 64-node Gauss-Hermite rule on its nonzero part.
    """
    if not (math.isfinite(c1) and c1 > 0.0):
        raise ValueError(f"c1 must be finite and positive, got {c1}")
    if not (math.isfinite(c2) and c2 >= 0.0):
        raise ValueError(f"c2 must be finite and >= 0, got {c2}")
    lo, hi = box.lower, box.upper
    if prior.discrete:
        return sum(
            p * _gaussian_mean_J(value, c1, c2, lo, hi)
            for value, p in prior.atoms()
            if p > 0.0
        )
    if prior.kind != GAUSSIAN:
        raise ValueError(f"unsupported prior kind {prior.kind!r}")
    z, w = gauss_hermite_normal(_GH_NODES)
    scale = math.sqrt(prior.variance)
    on_part = sum(
        wi * _gaussian_mean_J(scale * zi, c1, c2, lo, hi) for zi, wi in zip(z, w)
    )
    off_part = _gaussian_mean_J(0.0, c1, c2, lo, hi)
    return (1.0 - prior.sparsity) * off_part + prior.sparsity * on_part
