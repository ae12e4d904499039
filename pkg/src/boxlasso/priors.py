"""Sparse signal priors.

A prior here is the marginal law of one transmitted entry: a point mass at
zero mixed (with weight `sparsity`) with a nonzero-part distribution.  Two
nonzero parts are supported, a point mass at `amplitude` (the GSSK case)
and a centered Gaussian with variance `variance`.  Parameters are stored
raw; the mixture second moment E[S0^2] is exposed as a property and the
asymptotic predictor consumes it directly, so no unit-energy normalization
is enforced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

BERNOULLI = "bernoulli"
GAUSSIAN = "gaussian"
ZERO = "zero"


@dataclass(frozen=True)
class Prior:
    kind: str
    sparsity: float = 0.0
    amplitude: float = 1.0
    variance: float = 1.0

    def __post_init__(self):
        if self.kind not in (BERNOULLI, GAUSSIAN, ZERO):
            raise ValueError(f"unknown prior kind {self.kind!r}")
        if not 0.0 <= self.sparsity < 1.0:
            raise ValueError("sparsity must lie in [0, 1)")
        if self.kind == ZERO and self.sparsity != 0.0:
            raise ValueError("point mass at zero has sparsity 0")
        if self.kind == BERNOULLI and self.amplitude <= 0.0:
            raise ValueError("amplitude must be positive")
        if self.kind == GAUSSIAN and self.variance <= 0.0:
            raise ValueError("variance must be positive")

    @classmethod
    def sparse_bernoulli(cls, sparsity: float, amplitude: float = 1.0) -> "Prior":
        return cls(kind=BERNOULLI, sparsity=sparsity, amplitude=amplitude)

    @classmethod
    def sparse_gaussian(cls, sparsity: float, variance: float = 1.0) -> "Prior":
        return cls(kind=GAUSSIAN, sparsity=sparsity, variance=variance)

    @classmethod
    def point_mass_zero(cls) -> "Prior":
        return cls(kind=ZERO, sparsity=0.0)

    @property
    def discrete(self) -> bool:
        return self.kind in (BERNOULLI, ZERO)

    @property
    def second_moment(self) -> float:
        """E[S0^2] of the mixture; sets the signal energy in the predictor."""
        if self.kind == BERNOULLI:
            return self.sparsity * self.amplitude**2
        if self.kind == GAUSSIAN:
            return self.sparsity * self.variance
        return 0.0

    @property
    def nonzero_second_moment(self) -> float:
        """E[S0^2 | S0 != 0]."""
        if self.kind == BERNOULLI:
            return self.amplitude**2
        if self.kind == GAUSSIAN:
            return self.variance
        return 0.0

    def atoms(self) -> list[tuple[float, float]]:
        """(value, probability) pairs for discrete priors."""
        if not self.discrete:
            raise ValueError("atoms() requires a discrete prior")
        if self.kind == ZERO or self.sparsity == 0.0:
            return [(0.0, 1.0)]
        return [(0.0, 1.0 - self.sparsity), (self.amplitude, self.sparsity)]

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """i.i.d. draws from the mixture."""
        if count < 0:
            raise ValueError("count must be >= 0")
        out = np.zeros(count)
        if self.kind == ZERO or self.sparsity == 0.0:
            return out
        active = rng.random(count) < self.sparsity
        out[active] = self.sample_nonzero(int(active.sum()), rng)
        return out

    def sample_nonzero(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draws from the nonzero part only (used for fixed-support signals)."""
        if self.kind == BERNOULLI:
            return np.full(count, self.amplitude)
        if self.kind == GAUSSIAN:
            return rng.normal(0.0, math.sqrt(self.variance), size=count)
        raise ValueError("point mass at zero has no nonzero part")


def sample_prior(prior: Prior, count: int, rng_seed: int) -> np.ndarray:
    """Deterministic i.i.d. sample of `count` entries from the prior."""
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    return prior.sample(count, rng)


@lru_cache(maxsize=8)
def gauss_hermite_normal(nodes: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights turning sum(w * f(z)) into E[f(Z)], Z ~ N(0,1).

    Standard Gauss-Hermite rule with the change of variables z = sqrt(2) x,
    weights normalized so they sum to 1.
    """
    x, w = np.polynomial.hermite.hermgauss(nodes)
    return math.sqrt(2.0) * x, w / math.sqrt(math.pi)
