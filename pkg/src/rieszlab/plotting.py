"""Convergence reports: a CSV table and a PNG figure per run."""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def write_convergence(directory, stem: str, rows: list[tuple[int, Fraction, Fraction]],
                      title: str) -> tuple[Path, Path]:
    """Write ``<stem>.csv`` (exact values) and ``<stem>.png`` (log2 scale).

    ``rows`` holds ``(depth, error, bound)`` triples.
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, png_path = out / f"{stem}.csv", out / f"{stem}.png"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["depth", "error", "bound"])
        for d, err, bound in rows:
            w.writerow([d, f"{err.numerator}/{err.denominator}", f"{bound.numerator}/{bound.denominator}"])

    depths = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    # exact zeros have no place on a log axis
    pts = [(d, float(e)) for d, e, _ in rows if e > 0]
    if pts:
        ax.plot(*zip(*pts), "o-", label="error")
    ax.plot(depths, [float(b) for _, _, b in rows], "--", label="bound")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("depth n")
    ax.set_ylabel("max-norm error")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return csv_path, png_path
