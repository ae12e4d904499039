"""System geometry, power split, and the induced channel-estimation noise.

Everything is parameterized by ratios relative to the number of transmit
antennas n: receive ratio eta = m/n, sparsity ratio kappa = k/n, coherence
ratio tau = T/n > 1, and training ratio tau_t = T_t/n in [1, tau).  A total
power budget P is split by the fraction nu between data and training so
that P_t T_t + P_d T_d = P T holds exactly.  Training with orthogonal
pilots at power P_t for tau_t channel uses leaves per-entry estimation
noise sigma_w^2 = 1 / (1 + P_t tau_t) and estimate variance 1 - sigma_w^2.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SystemConfig:
    eta: float
    kappa: float
    tau: float
    tau_t: float
    nu: float
    total_power: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta > 0.0):
            raise ValueError("eta must be positive")
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in (0, 1)")
        if not (math.isfinite(self.tau) and self.tau > 1.0):
            raise ValueError("tau must exceed 1")
        if not 1.0 <= self.tau_t < self.tau:
            raise ValueError("tau_t must lie in [1, tau)")
        if not 0.0 < self.nu < 1.0:
            raise ValueError("nu must lie in (0, 1)")
        if not (math.isfinite(self.total_power) and self.total_power > 0.0):
            raise ValueError("total_power must be positive (linear scale)")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_counts(
        cls,
        m: int,
        n: int,
        k: int,
        frame_len: int,
        train_len: int,
        nu: float,
        total_power: float,
    ) -> "SystemConfig":
        """Build from antenna/symbol counts instead of ratios."""
        return cls(
            eta=m / n,
            kappa=k / n,
            tau=frame_len / n,
            tau_t=train_len / n,
            nu=nu,
            total_power=total_power,
            n=n,
        )

    # ---- derived ratios and powers -------------------------------------

    @property
    def tau_d(self) -> float:
        return self.tau - self.tau_t

    @property
    def p_data(self) -> float:
        return self.nu * self.total_power * self.tau / self.tau_d

    @property
    def p_train(self) -> float:
        return (1.0 - self.nu) * self.total_power * self.tau / self.tau_t

    @property
    def sigma_w2(self) -> float:
        """Per-entry variance of the channel estimation error."""
        return 1.0 / (1.0 + self.p_train * self.tau_t)

    @property
    def sigma_h2(self) -> float:
        """Per-entry variance of the channel estimate (1 - sigma_w2)."""
        return 1.0 - self.sigma_w2

    # ---- finite-size counts --------------------------------------------

    @property
    def m(self) -> int:
        return int(round(self.eta * self.n))

    @property
    def k(self) -> int:
        return int(round(self.kappa * self.n))

    @property
    def train_len(self) -> int:
        return int(round(self.tau_t * self.n))

    # ---- variations -----------------------------------------------------

    def with_nu(self, nu: float) -> "SystemConfig":
        return dataclasses.replace(self, nu=nu)

    def with_tau_t(self, tau_t: float) -> "SystemConfig":
        return dataclasses.replace(self, tau_t=tau_t)
