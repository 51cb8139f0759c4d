"""Render wall-and-chamber scans of rank-2 weight matrices to image files.

The Agg backend is selected before pyplot is imported, so rendering works
in headless environments.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.patches as mpatches  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402

from .toric import chamber_scan

_CHAMBER_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52",
                   "#8172b3", "#937860", "#da8bc3", "#8c8c8c")


def _stacked(names, per_line: int = 4) -> str:
    return "\n".join(", ".join(names[i:i + per_line])
                     for i in range(0, len(names), per_line))


def draw_chamber_scan(matrix, path: str, title: str | None = None) -> str:
    """Draw the rays of a weight matrix with their column labels and shade
    the chambers between consecutive rays.  Returns the path written."""
    scan = chamber_scan(matrix)
    angles = [math.degrees(math.atan2(b, a))
              for a, b in (r.direction for r in scan.rays)]

    fig, ax = plt.subplots(figsize=(8.0, 8.0))
    for k, (i, j) in enumerate(scan.chambers):
        lo, hi = sorted((angles[i], angles[j]))
        color = _CHAMBER_COLORS[k % len(_CHAMBER_COLORS)]
        ax.add_patch(mpatches.Wedge((0, 0), 1.04, lo, hi,
                                    facecolor=color, alpha=0.14,
                                    edgecolor="none"))
        mid = math.radians((lo + hi) / 2)
        ax.text(0.52 * math.cos(mid), 0.52 * math.sin(mid),
                f"chamber {k}", fontsize=9, style="italic",
                color=color, ha="center", va="center")

    for ray, theta in zip(scan.rays, angles):
        x, y = math.cos(math.radians(theta)), math.sin(math.radians(theta))
        ax.annotate("", xy=(x, y), xytext=(0, 0),
                    arrowprops=dict(arrowstyle="-|>", lw=1.7,
                                    color="#30303a"))
        a, b = ray.direction
        label = f"({a}, {b})\n{_stacked(list(ray.columns))}"
        ha = "left" if x > 0.05 else ("right" if x < -0.05 else "center")
        va = "bottom" if y > 0.05 else ("top" if y < -0.05 else "center")
        ax.text(1.1 * x, 1.1 * y, label, fontsize=8,
                ha=ha, va=va, linespacing=1.25)

    ax.set_xlim(-1.8, 1.8)
    ax.set_ylim(-1.8, 1.8)
    ax.set_aspect("equal")
    ax.axhline(0, color="#c8c8c8", lw=0.6, zorder=0)
    ax.axvline(0, color="#c8c8c8", lw=0.6, zorder=0)
    ax.set_xticks(())
    ax.set_yticks(())
    for side in ax.spines.values():
        side.set_visible(False)
    if title:
        ax.set_title(title, fontsize=11)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
