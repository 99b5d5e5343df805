"""Figures for interferograms and factor reports.

Output is deterministic: fixed canvas, fixed SVG hash salt, no date stamp,
text kept as text. Two runs on the same inputs give byte-identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import FACTOR, NON_FACTOR  # noqa: E402

FIGSIZE = (8.0, 4.5)

STYLE = {
    "svg.hashsalt": "ctes",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.0,
    "figure.dpi": 100,
}


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    meta = {"Date": None} if fmt in ("svg", "pdf") else {}
    if fmt == "png":
        meta = {"Software": None}
    fig.savefig(path, metadata=meta)
    plt.close(fig)


def plot_interferogram(ig, path, N=None):
    """Intensity against wavelength, or against xi_N when ``N`` is given."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        if N is None:
            ax.plot(ig.lam, ig.intensity, color="k")
            ax.set_xlabel("wavelength (nm)")
        else:
            ax.plot(N * ig.lam / ig.setup.x, ig.intensity, color="k")
            ax.set_xlabel(rf"$\xi_N$, N = {N}")
        cfg = ig.setup.cfg
        ax.set_ylabel("normalized intensity")
        ax.set_title(f"M = {cfg.M}, j = {cfg.j}, x = {ig.setup.x:.12g} nm")
        ax.set_ylim(0, 1.05 * max(1.0, float(np.max(ig.intensity))))
        fig.tight_layout()
        _save(fig, path)


def plot_factor_report(ig, report, path):
    """Rescaled interferogram with every checked trial factor marked.

    Factors get solid vertical lines, rejected trial factors dashed ones.
    """
    N = report.N
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        xi = N * ig.lam / ig.setup.x
        ax.plot(xi, ig.intensity, color="0.2", marker=".", markersize=2)
        for check in report.checks:
            if check.verdict == FACTOR:
                ax.axvline(check.ell, color="tab:red", linestyle="-")
            elif check.verdict == NON_FACTOR:
                ax.axvline(check.ell, color="tab:blue", linestyle="--", linewidth=0.6)
        ax.set_xlim(xi[0], xi[-1])
        ax.set_ylim(0, 1.05 * max(1.0, float(np.max(ig.intensity))))
        ax.set_xlabel(rf"$\xi_N = N\lambda/x$, N = {N}")
        ax.set_ylabel("normalized intensity")
        found = ", ".join(str(f) for f in report.factors) or "none"
        ax.set_title(f"factors found: {found}")
        fig.tight_layout()
        _save(fig, path)
