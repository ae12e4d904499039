"""Figure rendering for experiment outputs.

Each experiment gets one PNG next to its CSV: theory curves as lines, any
Monte-Carlo estimates as error bars (one standard error).  The Agg backend
keeps rendering headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .simulator import CHANNEL_FAMILIES


def _col(rows: list[dict], name: str) -> np.ndarray:
    return np.asarray([row[name] for row in rows], dtype=float)


def _errorbar(ax, x, rows, value_col, se_col, label):
    ax.errorbar(
        x,
        _col(rows, value_col),
        yerr=_col(rows, se_col),
        fmt="o",
        markersize=4,
        capsize=3,
        label=label,
    )


def _mc_errorbar(ax, x, rows, metric, label):
    _errorbar(ax, x, rows, f"{metric}_mc", f"{metric}_mc_se", label)


def _gamma_axis(ax):
    ax.set_xscale("log")
    ax.set_xlabel("regularization weight")
    ax.grid(True, which="both", alpha=0.3)


def _render_gamma_sweep(rows: list[dict], path: Path, summary: dict) -> None:
    gamma = _col(rows, "gamma")
    fig, (ax_mse, ax_res) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    ax_mse.plot(gamma, _col(rows, "mse_theory"), label="theory")
    _mc_errorbar(ax_mse, gamma, rows, "mse", "simulation")
    if "mse_theory_lasso" in rows[0]:
        ax_mse.plot(
            gamma, _col(rows, "mse_theory_lasso"), "--", label="theory, no box"
        )
        _errorbar(
            ax_mse, gamma, rows, "mse_mc_lasso", "mse_mc_se_lasso",
            "simulation, no box",
        )
    ax_mse.set_ylabel("mean square error")
    ax_res.plot(gamma, _col(rows, "residual_theory"), label="theory")
    _mc_errorbar(ax_res, gamma, rows, "residual", "simulation")
    ax_res.set_ylabel("normalized residual")
    for ax in (ax_mse, ax_res):
        _gamma_axis(ax)
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_support_curves(rows: list[dict], path: Path, summary: dict) -> None:
    gamma = _col(rows, "gamma")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(gamma, _col(rows, "psi_on_theory"), label="on-support, theory")
    _mc_errorbar(ax, gamma, rows, "psi_on", "on-support, simulation")
    ax.plot(gamma, _col(rows, "psi_off_theory"), label="off-support, theory")
    _mc_errorbar(ax, gamma, rows, "psi_off", "off-support, simulation")
    ax.set_ylabel("recovery probability")
    _gamma_axis(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_eer_curve(rows: list[dict], path: Path, summary: dict) -> None:
    gamma = _col(rows, "gamma")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(gamma, _col(rows, "eer_theory"), label="theory")
    _mc_errorbar(ax, gamma, rows, "eer", "simulation")
    if "eer_theory_lasso" in rows[0]:
        ax.plot(gamma, _col(rows, "eer_theory_lasso"), "--", label="theory, no box")
        _errorbar(
            ax, gamma, rows, "eer_mc_lasso", "eer_mc_se_lasso",
            "simulation, no box",
        )
    ax.set_ylabel("element error rate")
    _gamma_axis(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_objective_curve(rows: list[dict], path: Path, summary: dict) -> None:
    gamma = _col(rows, "gamma")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(gamma, _col(rows, "objective_theory"), label="theory")
    _mc_errorbar(ax, gamma, rows, "objective", "simulation")
    ax.set_ylabel("normalized optimal cost")
    _gamma_axis(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_power_sweep(rows: list[dict], path: Path, summary: dict) -> None:
    nu = _col(rows, "nu")
    fig, (ax_mse, ax_eer) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    ax_mse.plot(nu, _col(rows, "mse_theory"))
    ax_mse.set_ylabel("mean square error at tuned regularization")
    ax_eer.plot(nu, _col(rows, "eer_theory"))
    ax_eer.set_ylabel("element error rate at tuned regularization")
    reference = summary.get("closed_form_nu")
    for ax in (ax_mse, ax_eer):
        if reference is not None:
            ax.axvline(reference, linestyle="--", color="gray",
                       label="closed-form split")
            ax.legend()
        ax.set_xlabel("data energy ratio")
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_training_sweep(rows: list[dict], path: Path, summary: dict) -> None:
    tau_t = _col(rows, "tau_t")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(tau_t, _col(rows, "goodput_theory"), marker="o")
    ax.set_xlabel("training length ratio")
    ax.set_ylabel("goodput")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_universality(rows: list[dict], path: Path, summary: dict) -> None:
    gamma = _col(rows, "gamma")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(gamma, _col(rows, "mse_theory"), color="black", label="theory")
    for family in CHANNEL_FAMILIES:
        ax.errorbar(
            gamma,
            _col(rows, f"mse_mc_{family}"),
            yerr=_col(rows, f"mse_mc_se_{family}"),
            fmt="o",
            markersize=4,
            capsize=3,
            label=family,
        )
    ax.set_ylabel("mean square error")
    _gamma_axis(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


_RENDERERS = {
    "gamma_sweep": _render_gamma_sweep,
    "support_curves": _render_support_curves,
    "eer_curve": _render_eer_curve,
    "objective_curve": _render_objective_curve,
    "power_sweep": _render_power_sweep,
    "training_sweep": _render_training_sweep,
    "universality_check": _render_universality,
}


def render(experiment: str, rows: list[dict], path: str | Path, summary: dict) -> None:
    """Render the figure for one experiment's rows to a PNG file."""
    _RENDERERS[experiment](rows, Path(path), summary)
