"""Figure rendering for certified-fraction curves.

One line per (measure, method, threshold) group: CDF-based certificates solid,
naive dashed, best-baseline dotted, echoing the usual presentation of these
comparisons.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_curve_figure"]

_LINESTYLES = {"cdf": "-", "naive": "--", "best-baseline": ":"}


def render_curve_figure(rows: list[dict], path) -> None:
    """Render curve-table rows to an image file."""
    groups: dict[tuple, tuple[list, list]] = {}
    for row in rows:
        key = (row["measure"], row["method"], row["threshold"])
        xs, ys = groups.setdefault(key, ([], []))
        xs.append(row["radius"])
        ys.append(row["certified_fraction"])

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (measure, method, threshold), (xs, ys) in sorted(groups.items()):
        order = sorted(range(len(xs)), key=xs.__getitem__)
        ax.plot(
            [xs[i] for i in order],
            [ys[i] for i in order],
            linestyle=_LINESTYLES.get(method, "-"),
            label=f"{measure}, {method}, c={threshold:g}",
        )
    ax.set_xlabel("radius")
    ax.set_ylabel("certified fraction")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
