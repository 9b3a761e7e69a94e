"""Static figures: barcodes, PCA scatter, dispersion bars.

Figures are written as SVG with a fixed hash salt and no date stamp so that
identical inputs give identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .persistence import Barcode  # noqa: E402

__all__ = ["plot_barcode", "plot_projection", "plot_dispersion", "save_svg"]

RC = {
    "svg.hashsalt": "pitchtopo",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

BAR_COLORS = {0: "tab:blue", 1: "tab:red"}


def save_svg(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_barcode(bc: Barcode, title: str = "", path: str | Path | None = None):
    """One horizontal segment per bar; infinite bars run to the right margin with an arrow."""
    with plt.rc_context(RC):
        height = max(1.5, 0.18 * len(bc) + 0.8)
        fig, ax = plt.subplots(figsize=(6, height))
        finite_ends = [b.death for b in bc.finite] + [b.birth for b in bc]
        right = max(finite_ends, default=0.0)
        right = right * 1.15 if right > 0 else 1.0
        color = BAR_COLORS.get(bc.dimension, "k")
        for y, bar in enumerate(bc.bars):
            if bar.is_infinite:
                ax.annotate(
                    "",
                    xy=(right, y),
                    xytext=(bar.birth, y),
                    arrowprops=dict(arrowstyle="-|>", color=color, lw=1.5, shrinkA=0, shrinkB=0),
                )
            else:
                ax.plot([bar.birth, bar.death], [y, y], color=color, lw=1.5, solid_capstyle="butt")
        ax.set_xlim(0, right)
        ax.set_ylim(-1, max(len(bc), 1))
        ax.set_yticks([])
        ax.set_xlabel("filtration value")
        ax.set_title(title or f"H{bc.dimension} barcode")
        fig.tight_layout()
    if path is not None:
        save_svg(fig, path)
    return fig


def plot_projection(
    coords,
    labels: Sequence[str],
    groups: Sequence[str],
    explained=None,
    path: str | Path | None = None,
):
    """Scatter of PCA coordinates, one colour per group, points annotated with their labels."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 5))
        uniq = list(dict.fromkeys(groups))
        cmap = plt.get_cmap("tab10")
        for g_idx, g in enumerate(uniq):
            idx = [i for i, gg in enumerate(groups) if gg == g]
            ax.scatter(coords[idx, 0], coords[idx, 1], color=cmap(g_idx % 10), label=g, s=30)
        for (x, y), lab in zip(coords, labels):
            ax.annotate(lab, (x, y), textcoords="offset points", xytext=(3, 3), fontsize=7)
        if explained is not None:
            ax.set_xlabel(f"PC1 ({explained[0]:.3g})")
            ax.set_ylabel(f"PC2 ({explained[1]:.3g})")
        else:
            ax.set_xlabel("PC1")
            ax.set_ylabel("PC2")
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
    if path is not None:
        save_svg(fig, path)
    return fig


def plot_dispersion(values: Mapping[str, float], title: str = "dispersion", path: str | Path | None = None):
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(max(3, 0.8 * len(values) + 1.5), 3.5))
        names = list(values)
        ax.bar(range(len(names)), [values[n] for n in names], color="tab:gray")
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=30, ha="right")
        ax.set_ylabel("σ")
        ax.set_title(title)
        fig.tight_layout()
    if path is not None:
        save_svg(fig, path)
    return fig
