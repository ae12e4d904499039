"""Batch experiment harness.

Each experiment is described by a flat key = value configuration, runs a
one-dimensional sweep (regularization weight, power split, or training
length), and writes one CSV row per sweep point plus a JSON summary with
the tuned optima and built-in tolerance checks.  Outputs are deterministic
given the configuration and seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import SystemConfig
from .core import BoxBounds
from .errors import ConfigError, SchemaError
from .predictor import (
    predict_mse,
    predict_objective,
    predict_residual,
    predict_support_probs,
    solve_scalar,
)
from .priors import Prior
from .simulator import CHANNEL_FAMILIES, run_trials
from .tuning import closed_form_nu, optimal_power_allocation, optimal_training

EXPERIMENTS = (
    "gamma_sweep",
    "support_curves",
    "eer_curve",
    "objective_curve",
    "power_sweep",
    "training_sweep",
    "universality_check",
)

_GAMMA_LIKE = ("gamma_sweep", "support_curves", "eer_curve", "objective_curve")

_CHANNEL_MODES = ("statistical", "explicit_pilot")

_KNOWN_KEYS = frozenset(
    {
        "experiment",
        "eta",
        "kappa",
        "tau",
        "tau_t",
        "nu",
        "power_db",
        "power_linear",
        "n",
        "prior",
        "amplitude",
        "variance",
        "box_lower",
        "box_upper",
        "gamma_grid",
        "zeta",
        "trials",
        "seed",
        "threads",
        "compare_standard",
        "channel",
        "training_grid_points",
    }
)


def db_to_linear(db: float) -> float:
    """Power in dB to linear scale; used only at the configuration boundary."""
    return 10.0 ** (db / 10.0)


# ---------------------------------------------------------------------------
# configuration parsing


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat key = value document; '#' starts a comment."""
    mapping: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        if key in mapping:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        mapping[key] = value
    return mapping


def _need(mapping: dict[str, str], key: str) -> str:
    if key not in mapping:
        raise ConfigError(f"{key}: required key is missing")
    return mapping[key]


def _as_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _as_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _as_bool(key: str, text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {text!r}")


def _parse_grid(key: str, text: str) -> tuple[float, ...]:
    """Grid spec: 'geomspace:lo,hi,count', 'linspace:lo,hi,count', or an
    explicit comma-separated list of values."""
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if sep and kind in ("geomspace", "linspace"):
        parts = [p.strip() for p in rest.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"{key}: {kind} takes lo,hi,count")
        lo = _as_float(key, parts[0])
        hi = _as_float(key, parts[1])
        count = _as_int(key, parts[2])
        if count <= 0:
            raise ConfigError(f"{key}: empty grid")
        builder = np.geomspace if kind == "geomspace" else np.linspace
        values = builder(lo, hi, count)
    elif sep:
        raise ConfigError(f"{key}: unknown grid kind {kind!r}")
    else:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ConfigError(f"{key}: empty grid")
        values = np.asarray([_as_float(key, p) for p in parts])
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        raise ConfigError(f"{key}: grid values must be finite and positive")
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class ExperimentSpec:
    """A fully validated experiment description (powers already linear)."""

    experiment: str
    system: SystemConfig
    prior: Prior
    box: BoxBounds
    gamma_grid: tuple[float, ...]
    zeta: float
    trials: int
    seed: int
    threads: int
    compare_standard: bool
    channel_mode: str
    training_grid_points: int

    @classmethod
    def from_mapping(
        cls, mapping: dict[str, str], experiment: str | None = None
    ) -> "ExperimentSpec":
        unknown = sorted(set(mapping) - _KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown keys: {', '.join(unknown)}")

        name = mapping.get("experiment", experiment)
        if name is None:
            raise ConfigError("experiment: required key is missing")
        if name not in EXPERIMENTS:
            raise ConfigError(f"experiment: unknown experiment {name!r}")
        if experiment is not None and name != experiment:
            raise ConfigError(
                f"experiment: config says {name!r} but {experiment!r} was requested"
            )

        if "power_db" in mapping and "power_linear" in mapping:
            raise ConfigError("power_db: conflicts with power_linear; give one")
        if "power_db" in mapping:
            power = db_to_linear(_as_float("power_db", mapping["power_db"]))
        elif "power_linear" in mapping:
            power = _as_float("power_linear", mapping["power_linear"])
        else:
            raise ConfigError("power_db: required key is missing")

        kappa = _as_float("kappa", _need(mapping, "kappa"))
        try:
            system = SystemConfig(
                eta=_as_float("eta", _need(mapping, "eta")),
                kappa=kappa,
                tau=_as_float("tau", _need(mapping, "tau")),
                tau_t=_as_float("tau_t", _need(mapping, "tau_t")),
                nu=_as_float("nu", _need(mapping, "nu")),
                total_power=power,
                n=_as_int("n", _need(mapping, "n")),
            )
        except ValueError as exc:
            raise ConfigError(f"system: {exc}") from None

        kind = mapping.get("prior", "bernoulli").lower()
        amp_text = mapping.get("amplitude", "1.0")
        if amp_text.lower() == "unit_energy":
            amplitude = 1.0 / math.sqrt(kappa)
        else:
            amplitude = _as_float("amplitude", amp_text)
        variance = _as_float("variance", mapping.get("variance", "1.0"))
        try:
            if kind == "bernoulli":
                prior = Prior.sparse_bernoulli(kappa, amplitude)
            elif kind == "gaussian":
                prior = Prior.sparse_gaussian(kappa, variance)
            else:
                raise ConfigError(f"prior: unknown prior {kind!r}")
        except ValueError as exc:
            raise ConfigError(f"prior: {exc}") from None

        def bound(key: str) -> float:
            text = _need(mapping, key)
            token = text.lower()
            if token in ("amplitude", "-amplitude"):
                if kind != "bernoulli":
                    raise ConfigError(f"{key}: {text!r} needs a bernoulli prior")
                return amplitude if token == "amplitude" else -amplitude
            return _as_float(key, text)

        try:
            box = BoxBounds(bound("box_lower"), bound("box_upper"))
        except ValueError as exc:
            raise ConfigError(f"box: {exc}") from None

        if name in _GAMMA_LIKE or name == "universality_check":
            gamma_grid = _parse_grid("gamma_grid", _need(mapping, "gamma_grid"))
        elif "gamma_grid" in mapping:
            gamma_grid = _parse_grid("gamma_grid", mapping["gamma_grid"])
        else:
            gamma_grid = ()

        zeta = _as_float("zeta", mapping.get("zeta", "0.1"))
        if not zeta > 0.0:
            raise ConfigError("zeta: must be positive")

        trials = _as_int("trials", mapping.get("trials", "100"))
        if trials <= 0:
            raise ConfigError("trials: must be positive")
        seed = _as_int("seed", mapping.get("seed", "0"))
        if seed < 0:
            raise ConfigError("seed: must be nonnegative")
        threads = _as_int("threads", mapping.get("threads", "1"))
        if threads <= 0:
            raise ConfigError("threads: must be positive")

        channel_mode = mapping.get("channel", "statistical").lower()
        if channel_mode not in _CHANNEL_MODES:
            raise ConfigError(f"channel: unknown mode {channel_mode!r}")
        if name == "universality_check" and channel_mode != "statistical":
            raise ConfigError("channel: universality_check draws its own families")

        grid_points = _as_int(
            "training_grid_points", mapping.get("training_grid_points", "13")
        )
        if grid_points <= 0:
            raise ConfigError("training_grid_points: must be positive")

        return cls(
            experiment=name,
            system=system,
            prior=prior,
            box=box,
            gamma_grid=gamma_grid,
            zeta=zeta,
            trials=trials,
            seed=seed,
            threads=threads,
            compare_standard=_as_bool(
                "compare_standard", mapping.get("compare_standard", "false")
            ),
            channel_mode=channel_mode,
            training_grid_points=grid_points,
        )

    def with_overrides(
        self,
        seed: int | None = None,
        trials: int | None = None,
        threads: int | None = None,
    ) -> "ExperimentSpec":
        out = self
        if seed is not None:
            out = replace(out, seed=seed)
        if trials is not None:
            out = replace(out, trials=trials)
        if threads is not None:
            out = replace(out, threads=threads)
        return out


# ---------------------------------------------------------------------------
# output writers


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: str | Path, columns: list[str], rows: list[dict]) -> None:
    """Comma-separated, UTF-8, LF line endings, 17 significant digits."""
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_value(row[c]) for c in columns))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_summary(path: str | Path, summary: dict) -> None:
    Path(path).write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# sweep runners


def _theory_metrics(
    cfg: SystemConfig, gamma: float, prior: Prior, box: BoxBounds, zeta: float
) -> dict:
    sol = solve_scalar(cfg, gamma, prior, box)
    psi_on, psi_off = predict_support_probs(sol, cfg, gamma, prior, box, zeta)
    return {
        "beta_star": sol.beta_star,
        "lambda_star": sol.lambda_star,
        "mse_theory": predict_mse(sol, cfg),
        "residual_theory": predict_residual(sol),
        "objective_theory": predict_objective(sol),
        "psi_on_theory": psi_on,
        "psi_off_theory": psi_off,
        "eer_theory": 2.0 - psi_on - psi_off,
    }


_GAMMA_COLUMNS = [
    "gamma",
    "beta_star",
    "lambda_star",
    "mse_theory",
    "mse_mc",
    "mse_mc_se",
    "residual_theory",
    "residual_mc",
    "residual_mc_se",
    "objective_theory",
    "objective_mc",
    "objective_mc_se",
    "psi_on_theory",
    "psi_on_mc",
    "psi_on_mc_se",
    "psi_off_theory",
    "psi_off_mc",
    "psi_off_mc_se",
    "eer_theory",
    "eer_mc",
    "eer_mc_se",
    "trials",
]

_LASSO_COLUMNS = [
    "mse_theory_lasso",
    "mse_mc_lasso",
    "mse_mc_se_lasso",
    "eer_theory_lasso",
    "eer_mc_lasso",
    "eer_mc_se_lasso",
]


def _run_gamma_like(spec: ExperimentSpec) -> tuple[list[str], list[dict], dict]:
    from .core import UNBOUNDED_BOX

    columns = list(_GAMMA_COLUMNS)
    if spec.compare_standard:
        columns += _LASSO_COLUMNS
    rows = []
    for gamma in spec.gamma_grid:
        row = {"gamma": gamma}
        row.update(_theory_metrics(spec.system, gamma, spec.prior, spec.box, spec.zeta))
        emp = run_trials(
            spec.system,
            gamma,
            spec.box,
            spec.zeta,
            spec.trials,
            spec.seed,
            prior=spec.prior,
            mode=spec.channel_mode,
            threads=spec.threads,
        )
        row.update(
            mse_mc=emp.mse,
            mse_mc_se=emp.mse_se,
            residual_mc=emp.residual,
            residual_mc_se=emp.residual_se,
            objective_mc=emp.objective,
            objective_mc_se=emp.objective_se,
            psi_on_mc=emp.psi_on,
            psi_on_mc_se=emp.psi_on_se,
            psi_off_mc=emp.psi_off,
            psi_off_mc_se=emp.psi_off_se,
            eer_mc=emp.eer,
            eer_mc_se=emp.eer_se,
            trials=emp.trials,
        )
        if spec.compare_standard:
            sol = solve_scalar(spec.system, gamma, spec.prior, UNBOUNDED_BOX)
            on, off = predict_support_probs(
                sol, spec.system, gamma, spec.prior, UNBOUNDED_BOX, spec.zeta
            )
            std = run_trials(
                spec.system,
                gamma,
                UNBOUNDED_BOX,
                spec.zeta,
                spec.trials,
                spec.seed,
                prior=spec.prior,
                mode=spec.channel_mode,
                threads=spec.threads,
            )
            row.update(
                mse_theory_lasso=predict_mse(sol, spec.system),
                mse_mc_lasso=std.mse,
                mse_mc_se_lasso=std.mse_se,
                eer_theory_lasso=2.0 - on - off,
                eer_mc_lasso=std.eer,
                eer_mc_se_lasso=std.eer_se,
            )
        rows.append(row)

    summary = _gamma_like_summary(spec, rows)
    return columns, rows, summary


def _rel_dev(theory: float, mc: float) -> float:
    return abs(mc - theory) / max(abs(theory), 1e-300)


def _gamma_like_summary(spec: ExperimentSpec, rows: list[dict]) -> dict:
    mse_theory = np.asarray([r["mse_theory"] for r in rows])
    checks: dict[str, object] = {}
    mse_dev = max(_rel_dev(r["mse_theory"], r["mse_mc"]) for r in rows)
    res_dev = max(_rel_dev(r["residual_theory"], r["residual_mc"]) for r in rows)
    obj_dev = max(_rel_dev(r["objective_theory"], r["objective_mc"]) for r in rows)
    psi_dev = max(
        max(
            abs(r["psi_on_theory"] - r["psi_on_mc"]),
            abs(r["psi_off_theory"] - r["psi_off_mc"]),
        )
        for r in rows
    )
    eer_rows = [r for r in rows if r["eer_theory"] >= 0.01]
    eer_dev = (
        max(_rel_dev(r["eer_theory"], r["eer_mc"]) for r in eer_rows)
        if eer_rows
        else 0.0
    )
    checks["mse_rel_dev_max"] = mse_dev
    checks["mse_within_5pct"] = bool(mse_dev <= 0.05)
    checks["residual_rel_dev_max"] = res_dev
    checks["residual_within_5pct"] = bool(res_dev <= 0.05)
    checks["objective_rel_dev_max"] = obj_dev
    checks["objective_within_5pct"] = bool(obj_dev <= 0.05)
    checks["support_abs_dev_max"] = psi_dev
    checks["support_within_0.02"] = bool(psi_dev <= 0.02)
    checks["eer_rel_dev_max"] = eer_dev
    checks["eer_within_10pct"] = bool(eer_dev <= 0.10)
    if spec.compare_standard:
        box_le_theory = all(r["mse_theory"] <= r["mse_theory_lasso"] for r in rows)
        box_le_mc = all(r["mse_mc"] <= r["mse_mc_lasso"] for r in rows)
        checks["box_mse_le_lasso_theory"] = bool(box_le_theory)
        checks["box_mse_le_lasso_mc"] = bool(box_le_mc)
    return {
        "experiment": spec.experiment,
        "seed": spec.seed,
        "trials": spec.trials,
        "zeta": spec.zeta,
        "gamma_grid": list(spec.gamma_grid),
        "argmin_mse_gamma": float(spec.gamma_grid[int(np.argmin(mse_theory))]),
        "checks": checks,
    }


def _run_power_sweep(spec: ExperimentSpec) -> tuple[list[str], list[dict], dict]:
    mse = optimal_power_allocation(spec.system, spec.prior, spec.box, "mse")
    eer = optimal_power_allocation(
        spec.system, spec.prior, spec.box, "eer", zeta=spec.zeta
    )
    columns = ["nu", "mse_theory", "eer_theory"]
    rows = [
        {"nu": float(nu), "mse_theory": float(m), "eer_theory": float(e)}
        for nu, m, e in zip(mse.grid, mse.values, eer.values)
    ]
    reference = closed_form_nu(spec.system)
    gap = max(abs(mse.argopt - reference), abs(eer.argopt - reference))
    summary = {
        "experiment": spec.experiment,
        "seed": spec.seed,
        "zeta": spec.zeta,
        "nu_star_mse": mse.argopt,
        "nu_star_eer": eer.argopt,
        "closed_form_nu": reference,
        "checks": {
            "nu_gap_max": gap,
            "nu_within_0.02": bool(gap <= 0.02),
            "criteria_agree_0.02": bool(abs(mse.argopt - eer.argopt) <= 0.02),
            "interior_optimum": bool(not mse.at_boundary and not eer.at_boundary),
        },
    }
    return columns, rows, summary


def _run_training_sweep(spec: ExperimentSpec) -> tuple[list[str], list[dict], dict]:
    result = optimal_training(
        spec.system,
        spec.prior,
        spec.box,
        zeta=spec.zeta,
        grid_points=spec.training_grid_points,
    )
    tau = spec.system.tau
    columns = ["tau_t", "eer_theory", "goodput_theory"]
    rows = []
    for tau_t, goodput in zip(result.grid, result.values):
        prefactor = 1.0 - tau_t / tau
        rows.append(
            {
                "tau_t": float(tau_t),
                "eer_theory": float(1.0 - goodput / prefactor),
                "goodput_theory": float(goodput),
            }
        )
    shortest_is_best = bool(np.argmax(result.values) == 0)
    summary = {
        "experiment": spec.experiment,
        "seed": spec.seed,
        "zeta": spec.zeta,
        "tau_t_star": result.argopt,
        "goodput_max": result.opt_value,
        "at_boundary": result.at_boundary,
        "checks": {
            "shortest_training_is_best": shortest_is_best,
        },
    }
    return columns, rows, summary


def _run_universality(spec: ExperimentSpec) -> tuple[list[str], list[dict], dict]:
    columns = ["gamma", "mse_theory"]
    for family in CHANNEL_FAMILIES:
        columns += [f"mse_mc_{family}", f"mse_mc_se_{family}"]
    columns.append("trials")

    rows = []
    for gamma in spec.gamma_grid:
        sol = solve_scalar(spec.system, gamma, spec.prior, spec.box)
        row = {"gamma": gamma, "mse_theory": predict_mse(sol, spec.system)}
        for family in CHANNEL_FAMILIES:
            emp = run_trials(
                spec.system,
                gamma,
                spec.box,
                spec.zeta,
                spec.trials,
                spec.seed,
                prior=spec.prior,
                family=family,
                threads=spec.threads,
            )
            row[f"mse_mc_{family}"] = emp.mse
            row[f"mse_mc_se_{family}"] = emp.mse_se
            row["trials"] = emp.trials
        rows.append(row)

    z_pairs: dict[str, float] = {}
    for i, fam_a in enumerate(CHANNEL_FAMILIES):
        for fam_b in CHANNEL_FAMILIES[i + 1 :]:
            z_max = 0.0
            for row in rows:
                gap = abs(row[f"mse_mc_{fam_a}"] - row[f"mse_mc_{fam_b}"])
                scale = math.hypot(
                    row[f"mse_mc_se_{fam_a}"], row[f"mse_mc_se_{fam_b}"]
                )
                z_max = max(z_max, gap / max(scale, 1e-300))
            z_pairs[f"{fam_a}_vs_{fam_b}"] = z_max
    overall = max(z_pairs.values())
    summary = {
        "experiment": spec.experiment,
        "seed": spec.seed,
        "trials": spec.trials,
        "families": list(CHANNEL_FAMILIES),
        "pairwise_z_max": z_pairs,
        "checks": {
            "z_max": overall,
            "within_2_combined_se": bool(overall <= 2.0),
        },
    }
    return columns, rows, summary


_RUNNERS = {
    "gamma_sweep": _run_gamma_like,
    "support_curves": _run_gamma_like,
    "eer_curve": _run_gamma_like,
    "objective_curve": _run_gamma_like,
    "power_sweep": _run_power_sweep,
    "training_sweep": _run_training_sweep,
    "universality_check": _run_universality,
}


def run_experiment(
    spec: ExperimentSpec, out_dir: str | Path, make_plots: bool = True
) -> dict:
    """Run one experiment; write CSV, JSON summary, and optionally a figure.

    Returns the summary dictionary (also written to disk).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    columns, rows, summary = _RUNNERS[spec.experiment](spec)

    csv_path = out / f"{spec.experiment}.csv"
    summary_path = out / f"{spec.experiment}_summary.json"
    write_csv(csv_path, columns, rows)
    summary["csv"] = csv_path.name
    if make_plots:
        from . import plots

        figure_path = out / f"{spec.experiment}.png"
        plots.render(spec.experiment, rows, figure_path, summary)
        summary["figure"] = figure_path.name
    write_summary(summary_path, summary)
    return summary


# ---------------------------------------------------------------------------
# CSV validation


@dataclass(frozen=True)
class ToleranceCheck:
    """Compare <metric>_theory against <metric>_mc columns.

    kind is "relative" or "absolute"; rows where |theory| < floor are
    skipped (used to exclude near-zero targets from relative checks).
    """

    metric: str
    kind: str
    tol: float
    floor: float = 0.0

    def __post_init__(self):
        if self.kind not in ("relative", "absolute"):
            raise ValueError(f"unknown check kind {self.kind!r}")
        if self.tol < 0.0:
            raise ValueError("tolerance must be nonnegative")


@dataclass(frozen=True)
class RowDeviation:
    file: str
    row: int
    sweep_value: float
    metric: str
    theory: float
    mc: float
    deviation: float
    tol: float

    def describe(self) -> str:
        return (
            f"{self.file} row {self.row} ({self.metric}): theory={self.theory:.6g} "
            f"mc={self.mc:.6g} deviation={self.deviation:.3g} tol={self.tol:.3g}"
        )


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    rows_checked: int
    failures: tuple[RowDeviation, ...]
    worst: tuple[RowDeviation, ...]

    def lines(self) -> list[str]:
        out = []
        for dev in self.worst:
            out.append("worst  " + dev.describe())
        for dev in self.failures:
            out.append("FAIL   " + dev.describe())
        verdict = "pass" if self.passed else "fail"
        out.append(f"{verdict}: {self.rows_checked} comparisons, "
                   f"{len(self.failures)} failures")
        return out


def _read_csv(path: str | Path) -> tuple[list[str], list[list[float]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = lines[0].split(",")
    rows = [[float(cell) for cell in line.split(",")] for line in lines[1:] if line]
    return header, rows


def validate_against_theory(
    csv_paths: list[str | Path], checks: list[ToleranceCheck]
) -> ValidationReport:
    """Per-row theory-vs-MC comparisons across CSV files.

    Raises SchemaError when a requested metric has no matching column
    pair.  The report records every failing row and the worst row per
    (file, metric) pair.
    """
    failures: list[RowDeviation] = []
    worst: list[RowDeviation] = []
    checked = 0
    for path in csv_paths:
        header, rows = _read_csv(path)
        name = Path(path).name
        for check in checks:
            try:
                i_theory = header.index(f"{check.metric}_theory")
                i_mc = header.index(f"{check.metric}_mc")
            except ValueError:
                raise SchemaError(
                    f"{path}: no {check.metric}_theory/{check.metric}_mc columns"
                ) from None
            top: RowDeviation | None = None
            for row_index, row in enumerate(rows, start=2):
                theory, mc = row[i_theory], row[i_mc]
                if abs(theory) < check.floor:
                    continue
                if check.kind == "relative":
                    deviation = abs(mc - theory) / max(abs(theory), 1e-300)
                else:
                    deviation = abs(mc - theory)
                checked += 1
                record = RowDeviation(
                    name, row_index, row[0], check.metric, theory, mc, deviation,
                    check.tol,
                )
                if top is None or deviation > top.deviation:
                    top = record
                if deviation > check.tol:
                    failures.append(record)
            if top is not None:
                worst.append(top)
    return ValidationReport(
        passed=not failures,
        rows_checked=checked,
        failures=tuple(failures),
        worst=tuple(worst),
    )


def parse_tolerance_check(text: str) -> ToleranceCheck:
    """Parse 'metric=rel:0.05', 'metric=abs:0.02', optionally ',floor=x'."""
    metric, sep, rest = text.partition("=")
    metric = metric.strip()
    if not sep or not metric:
        raise ConfigError(f"check {text!r}: expected metric=kind:tol")
    floor = 0.0
    if "," in rest:
        rest, _, floor_part = rest.partition(",")
        key, sep2, floor_text = floor_part.partition("=")
        if key.strip() != "floor" or not sep2:
            raise ConfigError(f"check {text!r}: trailing part must be floor=<value>")
        floor = _as_float("floor", floor_text.strip())
    kind_text, sep3, tol_text = rest.partition(":")
    kinds = {"rel": "relative", "abs": "absolute"}
    kind = kinds.get(kind_text.strip().lower())
    if kind is None or not sep3:
        raise ConfigError(f"check {text!r}: kind must be rel or abs")
    tol = _as_float("tolerance", tol_text.strip())
    if tol < 0.0:
        raise ConfigError(f"check {text!r}: tolerance must be nonnegative")
    return ToleranceCheck(metric, kind, tol, floor)
