"""Optional PNG figures for traces and audit reports.

Extended-precision magnitudes in the explosion traces overflow float64,
so values are clipped to the float64 range before handing them to
matplotlib.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_F64_MAX = np.finfo(np.float64).max


def _clip(x):
    """Longdouble -> float64 with saturation instead of inf."""
    x = np.longdouble(x)
    if not np.isfinite(x):
        return float(x)
    if x > _F64_MAX:
        return float(_F64_MAX)
    if x < -_F64_MAX:
        return float(-_F64_MAX)
    return float(x)


def plot_trace(trace, path):
    ks = [rec.k for rec in trace.iterations]
    thetas = [_clip(rec.theta[0]) for rec in trace.iterations]
    fs = [_clip(rec.f) for rec in trace.iterations]
    evals = [rec.cum_obj_evals for rec in trace.iterations]

    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    axes[0].plot(ks, thetas, marker="o", ms=3)
    axes[0].set_yscale("symlog")
    axes[0].set_xlabel("k")
    axes[0].set_ylabel(r"$\theta_k$")
    axes[1].plot(ks, fs, marker="o", ms=3, color="tab:red")
    axes[1].set_yscale("symlog")
    axes[1].set_xlabel("k")
    axes[1].set_ylabel(r"$F(\theta_k)$")
    axes[2].plot(ks, evals, marker="s", ms=3, color="tab:green")
    axes[2].set_yscale("symlog")
    axes[2].set_xlabel("k")
    axes[2].set_ylabel("cumulative objective evals")
    fig.suptitle(trace.scenario)
    fig.tight_layout()
    with np.errstate(over="ignore", invalid="ignore"):
        fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_report(report, path):
    gnorms = [_clip(s.grad_norm) for s in report.samples]
    ratios = [_clip(s.ratio) for s in report.samples]

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(gnorms, ratios, marker="o", ms=3)
    if all(g > 0 for g in gnorms):
        ax.set_xscale("log")
    if all(r > 0 for r in ratios):
        ax.set_yscale("log")
    ax.set_xlabel(r"$\|\nabla F\|_2$")
    ax.set_ylabel(r"$\|\nabla^2 F\|_F / \|\nabla F\|_2^2$")
    title = report.model
    if report.trend_slope is not None and math.isfinite(report.trend_slope):
        title += f"  (tail slope {report.trend_slope:.3f})"
    ax.set_title(title)
    fig.tight_layout()
    with np.errstate(over="ignore", invalid="ignore"):
        fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
