"""Figure rendering for experiment outputs. Best effort: the CSV files
are the contract, figures are decoration alongside them."""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "simplicial-hopfield"


def save_overlap_boxplot(rows, path) -> None:
    """Box-and-whisker of final overlaps, grouped by condition within
    each pattern loading. Dashed line marks chance-level overlap."""
    grouped = defaultdict(list)
    for row in rows:
        grouped[(int(row["n_patterns"]), row["condition"])].append(float(row["best_overlap"]))
    if not grouped:
        return
    keys = sorted(grouped)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.6 * len(keys)), 4.0))
    ax.boxplot([grouped[k] for k in keys], medianprops={"color": "tab:orange"})
    ax.axhline(0.5, color="red", linestyle="--", linewidth=1.0)
    ax.set_xticks(range(1, len(keys) + 1))
    ax.set_xticklabels([f"{cond}\nP={p}" for p, cond in keys], fontsize=8)
    ax.set_ylabel("final overlap")
    ax.set_ylim(-0.02, 1.02)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_recall_curves(summary_rows, path) -> None:
    """Recall fraction versus memory loading, one line per
    (condition, measure) pair."""
    series = defaultdict(list)
    for row in summary_rows:
        key = (row["condition"], row["measure"])
        series[key].append((int(row["n_patterns"]), float(row["recall_fraction"])))
    if not series:
        return
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for (cond, measure), points in sorted(series.items()):
        points.sort()
        ax.plot(*zip(*points), marker="o", label=f"{cond} / {measure}")
    ax.set_xlabel("stored memories")
    ax.set_ylabel("fraction correctly recalled")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_energy_heatmap(grid, projected, inv_t, path) -> None:
    """Relative energies over the projected plane, pattern projections
    overplotted as black dots."""
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    extent = (
        projected[:, 0].min(),
        projected[:, 0].max(),
        projected[:, 1].min(),
        projected[:, 1].max(),
    )
    im = ax.imshow(grid, origin="lower", extent=extent, aspect="auto", cmap="viridis")
    ax.scatter(projected[:, 0], projected[:, 1], color="black", s=18, zorder=3)
    ax.set_xlabel("component 1")
    ax.set_ylabel("component 2")
    ax.set_title(f"relative energy, 1/T = {inv_t:g}")
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
