"""Static fraction-vs-parameter figures for sweep results."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from qinvasion.ensemble import SweepResult  # noqa: E402
from qinvasion.games import SWEEP_VARIABLE  # noqa: E402

_STYLE = {"C": ("tab:blue", "o"), "D": ("tab:red", "s"), "H": ("tab:green", "^"), "Q": ("tab:purple", "D")}


def plot_sweep(result: SweepResult, path: str | os.PathLike) -> None:
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for k, s in enumerate(result.strategies):
        color, marker = _STYLE.get(s.name, ("black", "."))
        ax.errorbar(result.grid, result.mean[:, k], yerr=result.std[:, k], label=str(s),
                    color=color, marker=marker, markersize=3, linewidth=1, capsize=1.5)
    ax.set_xlabel(SWEEP_VARIABLE[result.game] if result.game != "PD" else "T = b")
    ax.set_ylabel("fraction")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"{result.scenario} ({result.runs} runs)", fontsize=9)
    ax.legend(fontsize=7, frameon=False)
    fig.tight_layout()
    # fixed metadata keeps repeated plots byte-identical
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
