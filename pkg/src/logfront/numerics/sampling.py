"""Numeric tangency check of a symbolic log-front on real sample points."""

from __future__ import annotations

import numpy as np

from ..exactalg import SparsePoly, rename
from .config import DEFAULT, NumericsError, Tolerances
from .evaluate import planar_function
from .fibers import SampleReport, tangency_residual
from .trace import trace_real_locus

# sample points closer than this to an axis are skipped: the torus excludes a = 0, b = 0
_AXIS_GAP = 0.05


def _as_ab(R: SparsePoly) -> SparsePoly:
    if set(R.vars) <= {"z", "w"}:
        return rename(R, {"z": "a", "w": "b"})
    return R


def sample_on_curve(R: SparsePoly, window: tuple, n: int, resolution: int = 256,
                    tol: Tolerances = DEFAULT) -> np.ndarray:
    """n points of the real locus R(a, b) = 0, spread evenly along the trace."""
    R = _as_ab(R)
    trace = trace_real_locus(planar_function(R, "a", "b"), window, resolution, "R", tol)
    pts = trace.points()
    if len(pts):
        pts = pts[(np.abs(pts[:, 0]) > _AXIS_GAP) & (np.abs(pts[:, 1]) > _AXIS_GAP)]
    if len(pts) == 0:
        raise NumericsError("log-front has no real points in the window away from the axes")
    idx = np.unique(np.linspace(0, len(pts) - 1, n).round().astype(int))
    return pts[idx]


def sample_off_curve(R: SparsePoly, window: tuple, n: int, min_distance: float = 0.1,
                     resolution: int = 256, seed: int = 0, tol: Tolerances = DEFAULT) -> np.ndarray:
    """n random points of the window at distance >= min_distance from the real locus of R."""
    R = _as_ab(R)
    trace = trace_real_locus(planar_function(R, "a", "b"), window, resolution, "R", tol)
    curve = trace.points()
    x0, x1, y0, y1 = window
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(1000):
        cand = np.column_stack([rng.uniform(x0, x1, 4 * n), rng.uniform(y0, y1, 4 * n)])
        ok = (np.abs(cand[:, 0]) >= min_distance) & (np.abs(cand[:, 1]) >= min_distance)
        if len(curve):
            d = np.min(np.linalg.norm(cand[:, None, :] - curve[None, :, :], axis=2), axis=1)
            ok &= d >= min_distance + trace.cell
        out.extend(cand[ok].tolist())
        if len(out) >= n:
            return np.array(out[:n])
    raise NumericsError("could not place off-curve samples in the window")


def check_points(P: SparsePoly, Q: SparsePoly, pts: np.ndarray, threshold: float,
                 on_curve: bool, tol: Tolerances = DEFAULT) -> SampleReport:
    """Residuals at pts; a failure is a residual on the wrong side of threshold."""
    failures, worst = [], 0.0 if on_curve else float("inf")
    for a, b in pts:
        r = tangency_residual(P, Q, float(a), float(b), tol)
        if on_curve:
            worst = max(worst, r)
            bad = not r < threshold
        else:
            worst = min(worst, r)
            bad = not r > threshold
        if bad:
            failures.append((float(a), float(b), float(r)))
    return SampleReport(len(pts), float(worst), failures)


def verify_logfront(P: SparsePoly, Q: SparsePoly, R: SparsePoly, window: tuple = (-4, 4, -4, 4),
                    samples: int = 20, tol: Tolerances = DEFAULT, seed: int = 0) -> dict:
    """On-curve residuals below tol.tangency_on and off-curve ones above tol.tangency_off.

    For the off-curve report ``max_residual`` holds the smallest residual seen.
    """
    on = check_points(P, Q, sample_on_curve(R, window, samples, tol=tol), tol.tangency_on, True, tol)
    off = check_points(P, Q, sample_off_curve(R, window, samples, seed=seed, tol=tol),
                       tol.tangency_off, False, tol)
    return {"on_curve": on.to_json(), "off_curve": off.to_json() | {"min_residual": off.max_residual},
            "verdict": "pass" if on.verdict == off.verdict == "pass" else "fail"}
