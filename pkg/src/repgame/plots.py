"""Figure rendering for sweep and trajectory reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_COLORS = {"x_r": "tab:blue", "x_c": "tab:green", "x_d": "tab:red"}
_LABELS = {"x_r": "R (reputation)", "x_c": "C (cooperate)", "x_d": "D (defect)"}


def plot_trajectory(rows: list[dict], path: str) -> None:
    """Fraction-vs-round lines plus the payment schedule underneath."""
    rounds = [r["round"] for r in rows]
    fig, (ax, axp) = plt.subplots(
        2, 1, figsize=(7, 6), sharex=True, height_ratios=[3, 1]
    )
    for key in ("x_r", "x_c", "x_d"):
        ax.plot(rounds, [r[key] for r in rows], color=_COLORS[key], label=_LABELS[key])
    ax.set_ylabel("fraction of population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best")
    axp.plot(rounds, [r["p"] for r in rows], color="black")
    axp.set_xlabel("round")
    axp.set_ylabel("payment p")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(rows: list[dict], param: str, path: str) -> None:
    """Equilibrium components against the swept parameter."""
    values = [r["param_value"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 5))
    for key in ("x_r", "x_c", "x_d"):
        ax.plot(values, [r[key] for r in rows], color=_COLORS[key], label=_LABELS[key])
    invalid = [v for v, r in zip(values, rows) if not r["valid"]]
    if invalid:
        ax.axvspan(min(invalid), max(invalid), alpha=0.1, color="gray",
                   label="no valid equilibrium")
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel(param)
    ax.set_ylabel("equilibrium fraction")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
