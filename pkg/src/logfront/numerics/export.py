"""CSV point clouds and static SVG renderings of traces."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Optional

import numpy as np


def fmt(x: float) -> str:
    """Fixed 17-significant-digit float text."""
    return format(float(x), ".17g")


def points_csv(rows: Iterable, header=("x", "y", "residual")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def trace_csv(trace) -> str:
    rows = []
    for poly, res in zip(trace.polylines, trace.residuals):
        rows.extend(zip(poly[:, 0], poly[:, 1], res))
    return points_csv(rows)


def cloud_csv(points: np.ndarray) -> str:
    return points_csv(((p[0], p[1], 0.0) for p in points))


def svg_document(window: tuple, polylines: Iterable = (), points: Optional[np.ndarray] = None,
                 markers: Iterable = (), size: int = 512, title: str = "") -> str:
    """Polylines and dots mapped from ``window`` to a size x size viewBox (y up)."""
    x0, x1, y0, y1 = (float(v) for v in window)
    sx, sy = size / (x1 - x0), size / (y1 - y0)

    def tx(x, y):
        return (x - x0) * sx, (y1 - y) * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" '
           f'width="{size}" height="{size}">']
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>')
    for poly in polylines:
        coords = " ".join(f"{u:.4f},{v:.4f}" for u, v in (tx(x, y) for x, y in poly))
        out.append(f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="1"/>')
    if points is not None:
        for x, y in points:
            u, v = tx(x, y)
            out.append(f'<circle cx="{u:.4f}" cy="{v:.4f}" r="0.6" fill="steelblue"/>')
    for x, y in markers:
        u, v = tx(x, y)
        out.append(f'<circle class="cusp" cx="{u:.4f}" cy="{v:.4f}" r="4" fill="none" stroke="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
