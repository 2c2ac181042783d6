"""Figure rendering for the CLI report paths.

Each report-producing subcommand drops one or two PNGs next to its
delimited output.  Figures are presentation aids only; nothing downstream
consumes them, and --no-figures turns them off.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIG_KW = {"figsize": (7.0, 4.2), "dpi": 130}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def fig_dioph_primes(primes, dists, tau: float, N: int, path) -> Path:
    fig, ax = plt.subplots(**FIG_KW)
    ax.scatter(primes, dists, s=3, alpha=0.4, label=r"$\|\alpha p\|$")
    grid = np.geomspace(2, max(N, 4), 400)
    if tau > 0:
        ax.plot(grid, grid**-tau, "r-", lw=1.2, label=rf"$p^{{-{tau:.3g}}}$ cutoff")
    ax.set_xscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("distance to nearest integer")
    ax.set_title(f"constrained primes up to N={N}")
    ax.legend(loc="lower left", fontsize=8)
    return _save(fig, path)


def fig_goldbach(report, path) -> Path:
    ns = sorted(report.counts)
    rs = [report.counts[n] for n in ns]
    guide = [
        report.singular[n][0] * n / max(math.log(n), 1.0) ** 2 for n in ns
    ]
    fig, ax = plt.subplots(**FIG_KW)
    ax.scatter(ns, rs, s=2, alpha=0.35, label="r(n)")
    ax.plot(ns, guide, "r-", lw=1.0, alpha=0.8, label=r"$\mathfrak{S}(n)\, n/\log^2 n$")
    if report.exceptional:
        ax.scatter(report.exceptional, [0] * len(report.exceptional), s=18, c="k", marker="x", label="r(n)=0")
    ax.set_xlabel("even n")
    ax.set_ylabel("representations")
    ax.set_title(f"pair counts, tau={report.tau}")
    ax.legend(fontsize=8)
    return _save(fig, path)


def fig_triples(triples, N: int, path) -> Path:
    fig, ax = plt.subplots(**FIG_KW)
    if triples:
        p1 = [t[0] for t in triples]
        p3 = [t[2] for t in triples]
        ax.scatter(p1, p3, s=12, alpha=0.7)
    ax.set_xlabel("$p_1$")
    ax.set_ylabel("$p_3$")
    ax.set_title(f"progressions found below N={N} ({len(triples)} shown)")
    return _save(fig, path)


def fig_ratios(values, title: str, path, ceiling: float | None = None) -> Path:
    fig, ax = plt.subplots(**FIG_KW)
    xs = np.arange(len(values))
    ax.plot(xs, values, ".", ms=4, alpha=0.6)
    if ceiling is not None:
        ax.axhline(ceiling, color="r", lw=1.0, label=f"ceiling {ceiling:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel("instance")
    ax.set_ylabel("ratio")
    ax.set_title(title)
    return _save(fig, path)


def fig_param_margins(checks, path) -> Path:
    named = [c for c in checks if c.get("margin_log10") is not None]
    fig, ax = plt.subplots(**FIG_KW)
    if named:
        labels = [c["name"] for c in named]
        margins = [c["margin_log10"] for c in named]
        colors = ["tab:green" if c["satisfied"] else "tab:red" for c in named]
        ax.barh(labels, margins, color=colors)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlabel("log10 slack (rhs / lhs)")
    ax.set_title("scale-system inequality margins")
    ax.tick_params(axis="y", labelsize=7)
    return _save(fig, path)


def fig_split(per_m: dict, path) -> Path:
    ms = sorted(int(k) for k in per_m)
    vals = [per_m[str(m)] for m in ms]
    fig, ax = plt.subplots(**FIG_KW)
    ax.bar(ms, vals, width=0.8)
    ax.set_xlabel("arc family m")
    ax.set_ylabel("contribution (real part)")
    ax.set_title("major-arc contribution by shift family")
    return _save(fig, path)


def fig_bohr(rows, path) -> Path:
    fig, ax = plt.subplots(**FIG_KW)
    Ns = [r["N"] for r in rows]
    mids = [r["ratio_mid"] for r in rows]
    ax.semilogx(Ns, mids, "o-")
    ax.axhspan(0.5, 10.0, color="tab:green", alpha=0.08)
    ax.set_xlabel("N")
    ax.set_ylabel("weighted count / (delta N)")
    ax.set_title("smoothed small-distance counts")
    return _save(fig, path)
