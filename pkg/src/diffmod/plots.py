"""Report files for the bound experiment: delimited output plus figures."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import BoundReport, ExperimentResult

CSV_COLUMNS = [
    "instance", "d", "rank", "betti", "homology_length", "bound", "satisfied", "runtime",
]


def write_reports_csv(reports: List[BoundReport], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in reports:
            writer.writerow({
                "instance": r.instance,
                "d": r.d,
                "rank": r.rank,
                "betti": r.betti,
                "homology_length": r.homology_length,
                "bound": r.bound,
                "satisfied": r.satisfied,
                "runtime": f"{r.runtime:.6f}",
            })
    return path


def render_experiment_figures(result: ExperimentResult, out_dir) -> List[Path]:
    """Betti-versus-rank scatter and a Betti histogram, written as PNGs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    reports = result.reports
    bound = 2 ** result.d
    if not reports:
        return written

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ranks = [r.rank for r in reports]
    bettis = [r.betti for r in reports]
    ax.scatter(ranks, bettis, s=18, alpha=0.6, edgecolors="none")
    top = max(ranks + bettis) + 1
    ax.plot([0, top], [0, top], color="gray", linewidth=0.8, label="betti = rank")
    ax.axhline(bound, color="crimson", linewidth=1.0, linestyle="--",
               label=f"bound 2^{result.d} = {bound}")
    ax.set_xlabel("rank")
    ax.set_ylabel("betti number")
    ax.set_title(f"d = {result.d}: betti vs rank ({len(reports)} instances)")
    ax.legend(loc="upper left", frameon=False)
    fig.tight_layout()
    scatter_path = out_dir / f"betti_vs_rank_d{result.d}.png"
    fig.savefig(scatter_path, dpi=150)
    plt.close(fig)
    written.append(scatter_path)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    low = min(bettis)
    high = max(bettis)
    bins = [x - 0.5 for x in range(low, high + 2)]
    ax.hist(bettis, bins=bins, color="steelblue", alpha=0.85)
    ax.axvline(bound, color="crimson", linewidth=1.0, linestyle="--",
               label=f"bound 2^{result.d} = {bound}")
    ax.set_xlabel("betti number")
    ax.set_ylabel("instances")
    ax.set_title(f"d = {result.d}: betti distribution")
    ax.legend(frameon=False)
    fig.tight_layout()
    hist_path = out_dir / f"betti_histogram_d{result.d}.png"
    fig.savefig(hist_path, dpi=150)
    plt.close(fig)
    written.append(hist_path)
    return written
