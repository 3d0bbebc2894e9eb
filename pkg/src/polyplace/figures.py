"""Matplotlib rendering for the table-producing CLI commands.

Figures are a side output next to the delimited tables; files are written
with volatile metadata stripped so repeated runs stay byte-identical.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

matplotlib.rcParams["svg.hashsalt"] = "polyplace"

_STRIP_METADATA = {
    ".png": {"Software": None},
    ".pdf": {"CreationDate": None, "Producer": None, "Creator": None},
    ".svg": {"Date": None},
}


def _save(fig, path: str) -> None:
    suffix = "." + path.rsplit(".", 1)[-1].lower() if "." in path else ""
    fig.savefig(path, dpi=150, metadata=_STRIP_METADATA.get(suffix))
    plt.close(fig)


def save_pdf_figure(x, columns: dict[str, list], path: str) -> None:
    """Log-scale density curves, one line per table column."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, ys in columns.items():
        style = "--" if name.startswith("laplace") else "-"
        ax.semilogy(x, ys, style, label=name)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def save_stddev_figure(rows, path: str) -> None:
    """Standard deviation vs smoothing parameter, log-log, per mechanism."""
    series = {
        "polyplace": [(r.gamma, r.stddev_polyplace) for r in rows],
        "student_t": [(r.gamma, r.stddev_student_t_opt) for r in rows],
        "cauchy": [(r.gamma, r.stddev_cauchy_opt) for r in rows],
        "laplace_smooth": [(r.gamma, r.stddev_laplace_smooth) for r in rows],
    }
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, pts in series.items():
        xs = [g for g, v in pts if v is not None and math.isfinite(v)]
        ys = [v for _, v in pts if v is not None and math.isfinite(v)]
        if xs:
            ax.loglog(xs, ys, label=name)
    ax.axhline(
        rows[0].stddev_laplace_global,
        linestyle="--",
        color="gray",
        label="laplace_global",
    )
    ax.set_xlabel("gamma")
    ax.set_ylabel("standard deviation (unit smooth sensitivity)")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
