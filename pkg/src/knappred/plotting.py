"""Render sweep results to an image file alongside the delimited output."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import SweepRow, bound_for


def render_sweep_figure(rows: Sequence[SweepRow], path: str) -> None:
    """Plot the theoretical bound curve and the measured worst-case ratios."""
    if not rows:
        raise ValueError("no sweep rows to plot")
    algorithm = rows[0].algorithm
    r_lo = min(row.r for row in rows)
    r_hi = max(row.r for row in rows)
    pad = 0.05 * max(r_hi - r_lo, 1e-9)
    grid = [r_lo - pad + (r_hi - r_lo + 2 * pad) * i / 399 for i in range(400)]
    grid = [r for r in grid if r > 0]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if algorithm != "greedy":
        ax.plot(grid, [bound_for(algorithm, r)[0] for r in grid], color="tab:gray", label="guaranteed ratio")
    ax.scatter(
        [row.r for row in rows],
        [row.min_empirical_ratio for row in rows],
        color=["tab:blue" if row.passed else "tab:red" for row in rows],
        zorder=3,
        label="min empirical ratio",
    )
    ax.set_xlabel("error ratio r")
    ax.set_ylabel("profit ratio")
    ax.set_ylim(bottom=0.0)
    ax.set_title(f"{algorithm}: measured ratio vs. guarantee")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
