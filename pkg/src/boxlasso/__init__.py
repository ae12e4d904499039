"""Box-LASSO decoding for GSSK massive MIMO with imperfect CSI.

Library layout:

* core, priors, expectations: scalar math (saturated shrinkage, Gaussian
  tails, truncated moments, priors, Gaussian averages of the shrinkage
  objective).
* config: system ratios, power split, estimation noise.
* predictor: the scalar max-min saddle and closed-form asymptotic metrics.
* solver: FISTA-style Box-LASSO solver plus low-dimensional oracles.
* simulator: seeded Monte-Carlo trials.
* tuning: theory-driven hyper-parameter sweeps.
* experiments / cli: reproducible experiment harness with CSV, JSON
  summary, and figure output.
"""

from .config import SystemConfig
from .core import (
    BoxBounds,
    TruncatedGaussianMoments,
    UNBOUNDED_BOX,
    normal_pdf,
    q_function,
    saturated_shrinkage,
    shrinkage_objective,
    truncated_moments,
)
from .errors import (
    ConfigError,
    DimensionMismatch,
    InconsistentSolution,
    NoInteriorOptimum,
    PilotRankError,
    SchemaError,
)
from .expectations import expected_J
from .predictor import (
    ScalarSolution,
    predict_eer,
    predict_goodput,
    predict_mse,
    predict_objective,
    predict_residual,
    predict_support_probs,
    scalar_objective,
    solve_scalar,
    solve_scalar_multistart,
    support_probs_bernoulli,
)
from .experiments import (
    ExperimentSpec,
    ToleranceCheck,
    ValidationReport,
    db_to_linear,
    parse_config_file,
    run_experiment,
    validate_against_theory,
)
from .priors import Prior, gauss_hermite_normal, sample_prior
from .simulator import (
    ChannelRealization,
    EmpiricalMetrics,
    TransmissionInstance,
    generate_channel,
    generate_gssk,
    run_trials,
)
from .solver import (
    BoxLassoProblem,
    SolverReport,
    brute_force_oracle,
    gssk_map,
    solve_box_lasso,
    spectral_norm_sq,
)
from .tuning import (
    SweepResult,
    closed_form_nu,
    optimal_gamma,
    optimal_power_allocation,
    optimal_training,
)

__version__ = "0.1.0"

__all__ = [
    "BoxBounds",
    "BoxLassoProblem",
    "ChannelRealization",
    "ConfigError",
    "DimensionMismatch",
    "EmpiricalMetrics",
    "ExperimentSpec",
    "ToleranceCheck",
    "ValidationReport",
    "InconsistentSolution",
    "NoInteriorOptimum",
    "PilotRankError",
    "Prior",
    "ScalarSolution",
    "SchemaError",
    "SolverReport",
    "SweepResult",
    "SystemConfig",
    "TransmissionInstance",
    "TruncatedGaussianMoments",
    "UNBOUNDED_BOX",
    "brute_force_oracle",
    "closed_form_nu",
    "db_to_linear",
    "expected_J",
    "gauss_hermite_normal",
    "generate_channel",
    "generate_gssk",
    "gssk_map",
    "normal_pdf",
    "optimal_gamma",
    "optimal_power_allocation",
    "optimal_training",
    "parse_config_file",
    "predict_eer",
    "predict_goodput",
    "predict_mse",
    "predict_objective",
    "predict_residual",
    "predict_support_probs",
    "q_function",
    "run_experiment",
    "run_trials",
    "sample_prior",
    "saturated_shrinkage",
    "scalar_objective",
    "shrinkage_objective",
    "solve_box_lasso",
    "solve_scalar",
    "solve_scalar_multistart",
    "spectral_norm_sq",
    "support_probs_bernoulli",
    "truncated_moments",
    "validate_against_theory",
]
