"""Figures for reports: depth-vs-n limit plots and orbit-label histograms."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps the files reproducible
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_depths(ax, profiles: list, bar: int, title: str) -> None:
    for row in profiles:
        ax.plot(range(1, len(row) + 1), row, color="tab:blue", alpha=0.35, lw=1, marker=".")
    ax.axhline(bar, color="tab:red", ls="--", lw=1, label=f"N - 4 = {bar}")
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("n")
    ax.set_ylabel("depth to prediction")


def limit_figure(profiles: dict, N: int, path: Path) -> Path:
    """One panel per family; ``profiles`` maps a family name to its depth rows."""
    cols = min(4, len(profiles)) or 1
    rows = math.ceil(len(profiles) / cols) or 1
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 2.8 * rows), squeeze=False)
    for ax, (name, rows_) in zip(axes.flat, profiles.items()):
        plot_depths(ax, rows_, N - 4, name)
    for ax in list(axes.flat)[len(profiles):]:
        ax.axis("off")
    axes.flat[0].legend(fontsize=7, loc="lower right")
    fig.tight_layout()
    return _save(fig, path)


def histogram_figure(hist: dict, title: str, path: Path) -> Path:
    labels = list(hist)
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(labels)), 3))
    ax.bar(range(len(labels)), [hist[k] for k in labels], color="tab:green")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("points")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    return _save(fig, path)


def report_figures(report: dict, out_dir) -> list:
    """Render every figure the report has data for; returns the written paths."""
    out = Path(out_dir)
    N = report["params"]["N"]
    written = []
    profiles = {}
    for c in report["checks"]:
        obs = c["observed"]
        if not isinstance(obs, dict):
            continue
        if "depth_profiles" in obs:
            profiles[c["id"].removeprefix("limits.sweep.")] = obs["depth_profiles"]
        if "histogram" in obs:
            name = c["id"].replace(".", "_")
            written.append(histogram_figure(obs["histogram"], c["id"], out / f"{name}.png"))
    if profiles:
        written.insert(0, limit_figure(profiles, N, out / "limits_depth_vs_n.png"))
    return written
