"""Optional matplotlib figures rendered next to the delimited reports."""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .envelope import EnvelopeResult
from .model import FitResult, beta_logpdf

__all__ = ["density_overlay_figure", "qq_envelope_figure"]


def density_overlay_figure(values: np.ndarray, fits: Sequence[FitResult], path) -> None:
    """Histogram of the data with the fitted beta densities overlaid."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.hist(values, bins="auto", density=True, color="0.85", edgecolor="0.5",
            label="data")
    grid = np.linspace(1e-4, 1.0 - 1e-4, 512)
    for res in fits:
        dens = np.array([math.exp(beta_logpdf(g, res.params)) for g in grid])
        ax.plot(grid, dens, lw=1.4, label=res.method)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def qq_envelope_figure(env: EnvelopeResult, path) -> None:
    """QQ plot of observed vs simulated order statistics with the band."""
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    ax.fill_between(env.theoretical, env.lower, env.upper,
                    color="0.88", label=f"{100 * (env.band[1] - env.band[0]):.0f}% envelope")
    lims = (0.0, float(max(env.upper.max(), env.observed.max())) * 1.05)
    ax.plot(lims, lims, color="0.4", lw=0.8, ls="--")
    ax.plot(env.theoretical, env.observed, "o", ms=4, color="C0", label="observed")
    ax.set_xlabel("simulated quantiles")
    ax.set_ylabel("observed quantiles")
    ax.set_xlim(lims)
    ax.set_ylim(lims)
    ax.legend(frameon=False, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
