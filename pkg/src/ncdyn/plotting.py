"""Figure rendering for CLI report paths.

Commands that write delimited output to a file also render a companion
figure next to it (same stem, .png).  The CSV remains the data boundary;
figures are a convenience rendering of the same rows and can be switched
off with --no-fig.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (5.0, 3.2),
    "font.size": 9,
    "axes.linewidth": 0.6,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def figure_path(out_path: str) -> str:
    stem = out_path.rsplit(".", 1)[0] if "." in out_path.split("/")[-1] else out_path
    return stem + ".png"


def render_gram(gram, path: str):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        im = ax.imshow(gram.entries, origin="upper", cmap="viridis")
        ax.set_title(f"discretized Gram, n={gram.n}, h={gram.h:.4g}")
        ax.set_xlabel("cell j")
        ax.set_ylabel("cell i")
        ax.grid(False)
        fig.colorbar(im, ax=ax, fraction=0.046)
        fig.savefig(path)
        plt.close(fig)


def render_quasi(rows, path: str):
    ns = [r["n"] for r in rows]
    with plt.rc_context(_RC):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7.0, 3.0))
        ax1.plot(ns, [r["sigma_min"] for r in rows], "o-")
        ax1.set_xlabel("cells per interval")
        ax1.set_ylabel(r"$\sigma_{\min}(L)$")
        ax1.set_ylim(bottom=0)
        ax2.plot(ns, [r["hs_defect"] for r in rows], "s-", color="firebrick")
        ax2.set_xlabel("cells per interval")
        ax2.set_ylabel(r"$\|1 - L^*L\|_{HS}$")
        ax2.set_ylim(bottom=0)
        fig.suptitle("quasiorthogonality diagnostic")
        fig.savefig(path)
        plt.close(fig)


def render_sweep(header, rows, path: str):
    """Generic sweep rendering: every numeric column against the first."""
    if not rows:
        return
    cols = list(zip(*rows))
    x = np.asarray(cols[0], dtype=float)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for name, col in zip(header[1:], cols[1:]):
            ax.plot(x, np.asarray(col, dtype=float), "o-", label=name, markersize=3)
        ax.set_xlabel(header[0])
        ax.legend(frameon=False)
        fig.savefig(path)
        plt.close(fig)
