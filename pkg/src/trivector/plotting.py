"""Figures for CLI reports. Always renders off-screen with the Agg backend."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.8),
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps PNG bytes stable across runs
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def rank_histogram(report: dict, path: str | Path) -> Path:
    """Bar chart of points per rank of the skew family, log scale."""
    hist = report["rank_histogram"]
    ranks = sorted(int(r) for r in hist)
    counts = [hist[str(r)] if str(r) in hist else hist[r] for r in ranks]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        bars = ax.bar([str(r) for r in ranks], [max(c, 0) for c in counts], color="#4c72b0")
        ax.set_yscale("symlog", linthresh=1)
        ax.set_xlabel("rank of M(x)")
        ax.set_ylabel("points")
        ax.set_title(f"P^8(F_{report['p']}): {report['total_points']} points")
        for bar, c in zip(bars, counts):
            ax.annotate(str(c), (bar.get_x() + bar.get_width() / 2, max(c, 1)),
                        ha="center", va="bottom", fontsize=8)
        return _save(fig, path)


def verlinde_plot(rows: Sequence[Sequence[int]], path: str | Path) -> Path:
    """Series coefficients and closed-form values against d."""
    ds = [r[0] for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(ds, [r[1] for r in rows], "o", ms=4, mfc="none", label="series")
        ax.plot(ds, [r[2] for r in rows], "-", lw=1, label="closed form")
        ax.set_yscale("log")
        ax.set_xlabel("d")
        ax.set_ylabel("dimension")
        ax.legend(frameon=False)
        return _save(fig, path)


def char2_agreement(rows: Sequence[dict], path: str | Path) -> Path:
    """Point-by-point cubic and hyperdiscriminant zero patterns over P^8(F_2)."""
    idx = list(range(len(rows)))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.step(idx, [int(r["cubic"] == 0) for r in rows], where="mid", lw=0.8, label="cubic = 0")
        ax.step(idx, [int(r["hyperdisc2"] == 0) - 0.05 for r in rows], where="mid", lw=0.8,
                label="hyperdisc2 = 0")
        ax.set_yticks([0, 1])
        ax.set_xlabel("point index (sweep order)")
        ax.legend(frameon=False, loc="upper right")
        return _save(fig, path)
