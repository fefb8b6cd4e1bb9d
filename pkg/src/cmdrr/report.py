"""Render a schedule (and optional resolution) to files.

Writes a delimited games table plus PNG figures: the partnership matrix
in the style the designs are usually printed in, the round matrix when a
resolution is present, same-sex opposition heatmaps, and a per-player
bye chart.  Pure file output; nothing is shown interactively.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core import Schedule, matrix_from_schedule, opposition_profile
from .resolver import Resolution, resolution_matrix, verify_resolution


def _grid_figure(labels: list[list[str]], title: str, path: Path, highlight=None) -> None:
    n = len(labels)
    fig, ax = plt.subplots(figsize=(0.65 * n + 1.6, 0.5 * n + 1.4))
    ax.set_xlim(0, n)
    ax.set_ylim(0, n)
    ax.invert_yaxis()
    for i in range(n):
        for j in range(n):
            if highlight and highlight[i][j]:
                ax.add_patch(
                    plt.Rectangle((j, i), 1, 1, facecolor="#e8e8e8", edgecolor="none")
                )
            ax.text(j + 0.5, i + 0.5, labels[i][j], ha="center", va="center", fontsize=9)
    for t in range(n + 1):
        ax.axhline(t, color="0.7", lw=0.6)
        ax.axvline(t, color="0.7", lw=0.6)
    ax.set_xticks([x + 0.5 for x in range(n)])
    ax.set_xticklabels([f"F{j + 1}" for j in range(n)], fontsize=8)
    ax.set_yticks([y + 0.5 for y in range(n)])
    ax.set_yticklabels([f"M{i + 1}" for i in range(n)], fontsize=8)
    ax.tick_params(length=0)
    for spine in ax.spines.values():
        spine.set_visible(False)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _heatmap(ax, counts: np.ndarray, title: str) -> None:
    n = counts.shape[0] - 1
    data = counts[1:, 1:]
    im = ax.imshow(data, cmap="Blues", vmin=0, vmax=max(2, data.max()))
    for i in range(n):
        for j in range(n):
            if data[i, j]:
                ax.text(j, i, str(data[i, j]), ha="center", va="center", fontsize=7)
    ax.set_title(title, fontsize=10)
    ax.set_xticks(range(n))
    ax.set_xticklabels(range(1, n + 1), fontsize=7)
    ax.set_yticks(range(n))
    ax.set_yticklabels(range(1, n + 1), fontsize=7)
    return im


def write_report(
    s: Schedule,
    resolution: Resolution | None,
    out_dir: str | Path,
    stem: str = "schedule",
) -> list[Path]:
    """Write <stem>_games.csv and the figure files into ``out_dir``;
    returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    csv_path = out / f"{stem}_games.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["game", "male_a", "female_a", "male_b", "female_b"]
        if resolution is not None:
            header.append("round")
        writer.writerow(header)
        for idx, g in enumerate(s.games):
            row = [idx, g.side_a.male, g.side_a.female, g.side_b.male, g.side_b.female]
            if resolution is not None:
                row.append(resolution.round_of[idx])
            writer.writerow(row)
    written.append(csv_path)

    matrix = matrix_from_schedule(s)
    labels = [
        [("" if c is None else f"{c.male},{c.female}") for c in row]
        for row in matrix.cells
    ]
    spouse_cells = [[c is None for c in row] for row in matrix.cells]
    fig_path = out / f"{stem}_matrix.png"
    _grid_figure(labels, f"CMDRR({s.n},{s.k}) partnership matrix", fig_path, spouse_cells)
    written.append(fig_path)

    prof = opposition_profile(s)
    fig, axes = plt.subplots(1, 2, figsize=(3.2 + 0.38 * s.n * 2, 2.4 + 0.38 * s.n))
    _heatmap(axes[0], np.asarray(prof.male_opp), "male oppositions")
    im = _heatmap(axes[1], np.asarray(prof.female_opp), "female oppositions")
    fig.colorbar(im, ax=axes, shrink=0.75)
    opp_path = out / f"{stem}_oppositions.png"
    fig.savefig(opp_path, dpi=150)
    plt.close(fig)
    written.append(opp_path)

    if resolution is not None:
        grid = resolution_matrix(s, resolution)
        labels = [[("" if c is None else str(c)) for c in row] for row in grid]
        rounds_path = out / f"{stem}_rounds.png"
        _grid_figure(
            labels,
            f"round matrix ({resolution.num_rounds} rounds)",
            rounds_path,
            spouse_cells,
        )
        written.append(rounds_path)

        audit = verify_resolution(s, resolution)
        players = [str(p) for p, _ in audit.bye_counts]
        byes = [c for _, c in audit.bye_counts]
        fig, ax = plt.subplots(figsize=(max(4.0, 0.3 * len(players)), 2.8))
        ax.bar(range(len(players)), byes, color="#4878a8")
        ax.set_xticks(range(len(players)))
        ax.set_xticklabels(players, rotation=90, fontsize=7)
        ax.set_ylabel("byes")
        ax.set_title("byes per player")
        fig.tight_layout()
        byes_path = out / f"{stem}_byes.png"
        fig.savefig(byes_path, dpi=150)
        plt.close(fig)
        written.append(byes_path)

    return written
