"""Figures for CLI reports, rendered to files with the Agg backend."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .colouring import TwoColouring  # noqa: E402


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def colouring_heatmap(col: TwoColouring, path: str, title: str = "") -> str:
    """Adjacency picture: red pairs dark, blue pairs light, diagonal blank."""
    N = col.N
    grid = [[0.5 if u == v else (1.0 if col.is_red(u, v) else 0.0) for v in range(N)] for u in range(N)]
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.imshow(grid, cmap="coolwarm", vmin=0, vmax=1, interpolation="nearest")
    ax.set_title(title or f"red/blue colouring, N={N}")
    ax.set_xticks([])
    ax.set_yticks([])
    return _save(fig, path)


def level_counts(levels: list[dict], path: str, title: str = "") -> str:
    """Isomorphism classes of avoiding colourings per vertex count."""
    xs = [lv["N"] for lv in levels]
    ys = [lv["classes"] for lv in levels]
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(xs, ys, color="tab:gray")
    ax.set_yscale("symlog")
    ax.set_xlabel("N")
    ax.set_ylabel("avoiding classes")
    ax.set_title(title)
    return _save(fig, path)


def degree_histogram(report: dict, path: str) -> str:
    """Minimum red degree per trial against the required threshold."""
    mins = [t["minRedDegree"] for t in report["trials"]]
    need = float(eval_fraction(report["minDegreeNeeded"]))
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.hist(mins, bins=max(5, min(30, len(mins))), color="tab:red", alpha=0.7)
    ax.axvline(need, color="black", linestyle="--", label="needed")
    ax.set_xlabel("minimum red degree")
    ax.set_ylabel("trials")
    ax.legend()
    return _save(fig, path)


def eval_fraction(s: str):
    from fractions import Fraction

    return Fraction(s)
