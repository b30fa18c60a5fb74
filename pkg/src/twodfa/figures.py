"""Figure rendering for harness reports and dictionary exports.

Everything draws through the Agg backend and writes PNG files; nothing here
ever opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .identifiers import IdentifierDictionary
from .patterns import pattern_digits

_DOT_XY = {d: ((d - 1) % 3, -((d - 1) // 3)) for d in range(1, 10)}


def draw_pattern(ax, dots, color="tab:blue") -> None:
    """One pattern on a 3x3 grid: grey dots, directed strokes, a ring on the
    starting dot, and the numeric form underneath."""
    xs = [_DOT_XY[d][0] for d in range(1, 10)]
    ys = [_DOT_XY[d][1] for d in range(1, 10)]
    ax.scatter(xs, ys, s=40, color="0.8", zorder=1)
    px = [_DOT_XY[d][0] for d in dots]
    py = [_DOT_XY[d][1] for d in dots]
    for i in range(len(dots) - 1):
        ax.annotate(
            "",
            xy=(px[i + 1], py[i + 1]),
            xytext=(px[i], py[i]),
            arrowprops=dict(arrowstyle="-|>", color=color, lw=2, shrinkA=8, shrinkB=8),
            zorder=2,
        )
    ax.scatter(px, py, s=60, color=color, zorder=3)
    ax.scatter([px[0]], [py[0]], s=180, facecolors="none", edgecolors=color, linewidths=2, zorder=4)
    ax.set_title(pattern_digits(dots), fontsize=10)
    ax.set_xlim(-0.5, 2.5)
    ax.set_ylim(-2.5, 0.5)
    ax.set_aspect("equal")
    ax.axis("off")


def save_dictionary_sheet(dictionary: IdentifierDictionary, path) -> Path:
    """Contact sheet of every pattern in a dictionary."""
    if dictionary.kind != "pattern":
        raise ValueError("only pattern dictionaries have a drawable sheet")
    n = len(dictionary.entries)
    cols = min(5, n)
    rows = (n + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(2.0 * cols, 2.2 * rows))
    axes = [axes] if n == 1 else list(axes.flat)
    for ax, entry in zip(axes, dictionary.entries):
        draw_pattern(ax, entry.payload)
    for ax in axes[n:]:
        ax.axis("off")
    fig.suptitle(
        f"identifier dictionary ({n} patterns, pairwise distance ≥ "
        f"{dictionary.min_pairwise_distance})"
    )
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_slip_far_chart(extras: dict, path) -> Path:
    """FAR/FRR outcome counts from the slip scenario next to the expectation."""
    labels = ["false accepts", "false rejects", "exact draws"]
    values = [extras["far"], extras["frr"], extras["exact"]]
    fig, ax = plt.subplots(figsize=(6, 4))
    bars = ax.bar(labels, values, color=["tab:red", "tab:orange", "tab:green"])
    ax.bar_label(bars)
    expected = extras.get("expected_frr")
    if expected:
        ax.axhline(expected, color="0.4", linestyle="--", lw=1)
        ax.annotate(
            f"expected rejects ≈ {expected:.0f}",
            xy=(1, expected),
            xytext=(1.3, expected * 1.15),
            fontsize=9,
            color="0.3",
        )
    ax.set_ylabel("trials")
    ax.set_title(
        f"single-slip model, {extras['trials']} trials, "
        f"slip probability {extras['slip_probability']}"
    )
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_summary_chart(reports, path) -> Path:
    """Assertions passed/failed per scenario."""
    names = [r.scenario for r in reports]
    passed = [r.counts()[0] for r in reports]
    failed = [r.counts()[1] - r.counts()[0] for r in reports]
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(names) + 1.5))
    ax.barh(names, passed, color="tab:green", label="passed")
    ax.barh(names, failed, left=passed, color="tab:red", label="failed")
    ax.invert_yaxis()
    ax.set_xlabel("assertions")
    ax.legend(loc="lower right")
    ax.set_title("adversary scenario results")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
