"""Histogram rendering for spectral measure estimates."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .doslab import SpectralMeasureEstimate


def render_measure(
    est: SpectralMeasureEstimate,
    path: str,
    title: str = "",
) -> None:
    """Write a PNG of the eigenvalue histogram with detected atoms marked.

    Output bytes depend only on the estimate and title: fixed geometry,
    no timestamps in metadata.
    """
    edges = np.asarray(est.bin_edges)
    masses = np.asarray(est.masses)
    fig, ax = plt.subplots(figsize=(8.0, 4.5), dpi=110)
    ax.bar(
        edges[:-1],
        masses,
        width=np.diff(edges),
        align="edge",
        color="#4878a8",
        edgecolor="none",
    )
    top = float(masses.max()) if masses.size else 1.0
    for loc, mass in est.atoms:
        ax.axvline(loc, color="#b0413e", linestyle="--", linewidth=1.2)
        ax.annotate(
            f"{mass:.3f}",
            xy=(loc, top),
            xytext=(2, -2),
            textcoords="offset points",
            color="#b0413e",
            fontsize=9,
            va="top",
        )
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("mass per bin")
    if title:
        ax.set_title(title)
    note = f"dimension {est.dimension}, girth {est.girth}"
    if est.lift_degree is not None:
        note += f", lift degree {est.lift_degree}"
    ax.annotate(
        note,
        xy=(0.99, 0.98),
        xycoords="axes fraction",
        ha="right",
        va="top",
        fontsize=8,
        color="#555555",
    )
    fig.tight_layout()
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
