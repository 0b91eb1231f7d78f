"""Static matplotlib figures (PNG, PDF or SVG by file extension) for reports."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lattice import LatticePolygon  # noqa: E402

_TITLE_MAX = 60


def _finish(fig, ax, window, title: str, path) -> Path:
    if window is not None:
        x0, x1, y0, y1 = window
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title if len(title) <= _TITLE_MAX else title[:_TITLE_MAX - 3] + "...", fontsize=9)
    path = Path(path)
    # fixed metadata keeps repeated renders identical
    meta = {"Software": None} if path.suffix.lower() == ".png" else {}
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=meta or None)
    plt.close(fig)
    return path


def trace_figure(trace, path, cusps: Iterable = (), title: str = "",
                 labels: tuple = ("x", "y")) -> Path:
    """Polylines of a TraceSet with optional cusp markers."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for poly in trace.polylines:
        ax.plot(poly[:, 0], poly[:, 1], color="black", lw=0.8)
    cusps = list(cusps)
    if cusps:
        ax.scatter([c.x for c in cusps], [c.y for c in cusps], s=40, facecolors="none",
                   edgecolors="red", label=f"{len(cusps)} cusps")
        ax.legend(loc="upper right")
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    return _finish(fig, ax, trace.window, title, path)


def cloud_figure(points: np.ndarray, path, window: Optional[tuple] = None, title: str = "",
                 labels: tuple = ("log|z|", "log|w|")) -> Path:
    """Scatter plot of an amoeba or alga point cloud."""
    fig, ax = plt.subplots(figsize=(5, 5))
    if len(points):
        ax.scatter(points[:, 0], points[:, 1], s=0.3, color="steelblue", linewidths=0)
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    return _finish(fig, ax, window, title, path)


def polygon_figure(polygons: dict, path, title: str = "") -> Path:
    """Lattice polygons (name -> LatticePolygon) drawn with their lattice points."""
    fig, ax = plt.subplots(figsize=(5, 5))
    xs, ys = [], []
    for k, (name, poly) in enumerate(polygons.items()):
        poly: LatticePolygon
        v = np.array(poly.vertices + poly.vertices[:1], dtype=float)
        ax.plot(v[:, 0], v[:, 1], lw=1.2, color=f"C{k}", ls=("-", "--", ":")[k % 3], label=name)
        pts = np.array(sorted(poly.points()), dtype=float)
        ax.scatter(pts[:, 0], pts[:, 1], s=6, color=f"C{k}")
        xs.extend(v[:, 0])
        ys.extend(v[:, 1])
    ax.legend(loc="best")
    window = (min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1) if xs else None
    return _finish(fig, ax, window, title, path)
