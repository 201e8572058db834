"""Figure rendering for experiment tables. Headless backend only; every
function writes a file and returns its path, nothing is shown
interactively."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["risk_figure", "stationarity_figure"]


def risk_figure(rows, path) -> str:
    """Mean excess risk against sample size, one line per
    (distribution, estimator) pair. Cells with infinite mean are dropped
    from the line and flagged in the legend."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    series = {}
    for r in rows:
        key = (str(r["distribution_id"]), str(r["estimator"]))
        series.setdefault(key, []).append((int(r["n"]), float(r["value"])))
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    positive = True
    for (dist, est), pts in sorted(series.items()):
        pts.sort()
        finite = [(n, v) for n, v in pts if math.isfinite(v)]
        n_inf = len(pts) - len(finite)
        label = f"{est} | {dist}" + (f" ({n_inf} inf)" if n_inf else "")
        if finite:
            ns, vs = zip(*finite)
            ax.plot(ns, vs, marker="o", label=label)
            positive = positive and all(v > 0 for v in vs)
        else:
            ax.plot([], [], marker="o", label=label)
    ax.set_xscale("log")
    if positive and series:
        ax.set_yscale("log")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("mean excess risk")
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def stationarity_figure(errors, threshold, bound, path) -> str:
    """Histogram of per-replication stationarity errors with the
    exceedance threshold marked."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.hist([float(e) for e in errors], bins=40, color="#4878a8", alpha=0.85)
    ax.axvline(float(threshold), color="crimson", linestyle="--",
               label=f"t = {float(threshold):g} (tail bound {float(bound):.3g})")
    ax.set_xlabel("stationarity error")
    ax.set_ylabel("replications")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
