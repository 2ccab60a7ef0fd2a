"""Figure rendering for benchmark reports and pool distance statistics.

Figures are written to files next to the delimited text outputs; rendering
uses the Agg backend so it works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .synthbench import BenchReport

_STRATEGY_STYLE = {
    "random": dict(color="#888888", marker="o", linestyle="--"),
    "sal": dict(color="#1f77b4", marker="s"),
    "mal": dict(color="#2ca02c", marker="^"),
    "kmal": dict(color="#d62728", marker="D"),
}


def render_bench_figure(report: BenchReport, path) -> None:
    """Two panels: mean cluster coverage and mean outliers selected, vs budget."""
    fig, (ax_cov, ax_out) = plt.subplots(1, 2, figsize=(10, 4))
    n_seeds = max(report.seeds_run, 1)
    for strategy in report.strategies:
        budgets, cov, outl = [], [], []
        for s in report.summaries:
            if s.strategy is strategy:
                budgets.append(s.budget)
                cov.append(s.mean_clusters_covered)
                outl.append(s.outliers_selected / n_seeds)
        style = _STRATEGY_STYLE.get(strategy.value, {})
        ax_cov.plot(budgets, cov, label=strategy.value, **style)
        ax_out.plot(budgets, outl, label=strategy.value, **style)
    ax_cov.set_xlabel("budget")
    ax_cov.set_ylabel("mean clusters covered")
    ax_cov.set_ylim(bottom=0)
    ax_cov.axhline(report.config.clusters, color="black", linewidth=0.8, alpha=0.4)
    ax_cov.legend()
    ax_out.set_xlabel("budget")
    ax_out.set_ylabel("mean outliers selected")
    ax_out.set_ylim(bottom=0)
    ax_out.legend()
    fig.suptitle(
        f"coverage benchmark: k={report.config.clusters}, "
        f"{report.seeds_run} seeds"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_distance_histogram(d: np.ndarray, ave_d: float, path, bins: int = 32) -> None:
    """Histogram of nearest-neighbor distances with the pool average marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(np.asarray(d, dtype=np.float64), bins=bins, color="#1f77b4", alpha=0.85)
    ax.axvline(ave_d, color="#d62728", linewidth=1.5, label=f"average = {ave_d:.4g}")
    ax.set_xlabel("nearest-neighbor distance")
    ax.set_ylabel("samples")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
