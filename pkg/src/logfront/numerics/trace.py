"""Real zero sets of planar functions by marching squares, and cusp detection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, NumericsError, Tolerances


@dataclass
class TraceSet:
    """Polylines on f = 0; ``residuals`` are |f| divided by the grid scale."""

    polylines: list
    residuals: list
    window: tuple
    resolution: int
    tag: str = ""
    scale: float = 1.0
    closed: list = field(default_factory=list)

    @property
    def cell(self) -> float:
        x0, x1, y0, y1 = self.window
        return max(x1 - x0, y1 - y0) / self.resolution

    def points(self) -> np.ndarray:
        if not self.polylines:
            return np.zeros((0, 2))
        return np.concatenate(self.polylines)

    def all_residuals(self) -> np.ndarray:
        if not self.residuals:
            return np.zeros(0)
        return np.concatenate(self.residuals)

    def length(self) -> float:
        return float(sum(np.linalg.norm(np.diff(p, axis=0), axis=1).sum() for p in self.polylines))


def _bisect(f, lo: np.ndarray, hi: np.ndarray, flo: np.ndarray, axis: int, fixed: np.ndarray) -> np.ndarray:
    """Vectorized bisection of f along one axis between lo and hi."""
    lo, hi = lo.copy(), hi.copy()
    slo = flo >= 0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = f(mid, fixed) if axis == 0 else f(fixed, mid)
        same = (fm >= 0) == slo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        if np.all((hi - lo) <= 2 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))):
            break
    # choose whichever endpoint has the smaller |f|
    flo2 = np.abs(f(lo, fixed) if axis == 0 else f(fixed, lo))
    fhi2 = np.abs(f(hi, fixed) if axis == 0 else f(fixed, hi))
    return np.where(flo2 <= fhi2, lo, hi)


def trace_real_locus(f, window: tuple, resolution: int, tag: str = "",
                     tol: Tolerances = DEFAULT) -> TraceSet:
    """Trace {f = 0} in ``window`` = (x0, x1, y0, y1) on a resolution x resolution grid."""
    x0, x1, y0, y1 = (float(v) for v in window)
    if not (x0 < x1 and y0 < y1):
        raise NumericsError("window must have min < max on both axes")
    if resolution < 8:
        raise NumericsError("resolution must be at least 8")
    n = int(resolution)
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    X, Y = np.meshgrid(xs, ys)
    F = np.asarray(f(X, Y), dtype=float)
    if not np.all(np.isfinite(F)):
        raise NumericsError("function is not finite on the grid")
    scale = float(np.max(np.abs(F))) or 1.0
    S = F >= 0

    # crossing points: horizontal edges (j, i)-(j, i+1), vertical edges (j, i)-(j+1, i)
    hj, hi_ = np.nonzero(S[:, :-1] != S[:, 1:])
    vj, vi = np.nonzero(S[:-1, :] != S[1:, :])
    hx = _bisect(f, xs[hi_], xs[hi_ + 1], F[hj, hi_], 0, ys[hj])
    vy = _bisect(f, ys[vj], ys[vj + 1], F[vj, vi], 1, xs[vi])
    pts = {}
    for k in range(len(hj)):
        pts[("h", int(hj[k]), int(hi_[k]))] = (hx[k], ys[hj[k]])
    for k in range(len(vj)):
        pts[("v", int(vj[k]), int(vi[k]))] = (xs[vi[k]], vy[k])

    # cell connectivity
    adj: dict = {key: [] for key in pts}
    cells = set()
    for j, i in zip(hj.tolist(), hi_.tolist()):
        cells.update(((j, i), (j - 1, i)))
    for j, i in zip(vj.tolist(), vi.tolist()):
        cells.update(((j, i), (j, i - 1)))
    for j, i in sorted(cells):
        if not (0 <= j < n and 0 <= i < n):
            continue
        bottom, top = ("h", j, i), ("h", j + 1, i)
        left, right = ("v", j, i), ("v", j, i + 1)
        crossed = [e for e in (bottom, right, top, left) if e in pts]
        if len(crossed) == 2:
            pairs = [tuple(crossed)]
        elif len(crossed) == 4:
            centre = float(f(np.array(xs[i] + 0.5 * (xs[1] - xs[0])), np.array(ys[j] + 0.5 * (ys[1] - ys[0]))))
            if (centre >= 0) == S[j, i]:
                pairs = [(bottom, right), (top, left)]
            else:
                pairs = [(left, bottom), (right, top)]
        else:  # pragma: no cover - parity forbids odd counts
            continue
        for u, v in pairs:
            adj[u].append(v)
            adj[v].append(u)

    polylines, residuals, closed = [], [], []
    seen = set()
    starts = [k for k in sorted(adj) if len(adj[k]) == 1] + sorted(adj)
    for s in starts:
        if s in seen:
            continue
        chain = [s]
        seen.add(s)
        prev, cur = None, s
        is_closed = False
        while True:
            nxt = [k for k in adj[cur] if k != prev]
            if not nxt:
                break
            k = nxt[0]
            if k == s:
                is_closed = True
                break
            if k in seen:
                break
            chain.append(k)
            seen.add(k)
            prev, cur = cur, k
        if is_closed:
            chain.append(s)
        if len(chain) < 2:
            continue
        arr = np.array([pts[k] for k in chain], dtype=float)
        polylines.append(arr)
        residuals.append(np.abs(f(arr[:, 0], arr[:, 1])) / scale)
        closed.append(is_closed)
    return TraceSet(polylines, residuals, (x0, x1, y0, y1), n, tag, scale, closed)


@dataclass(frozen=True)
class Cusp:
    x: float
    y: float
    angle: float
    confidence: float


def _turning(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.einsum("...i,...i->...", u, v) / (nu * nv)
    return np.arccos(np.clip(np.nan_to_num(c, nan=1.0), -1.0, 1.0))


def cusp_detect(trace: TraceSet, angle_threshold: float = DEFAULT.cusp_angle,
                max_lag: int = 5, isolation_cells: float = 2.0, arc_cells: float = 25.0) -> list:
    """Heuristic cusp finder on a refined trace.

    A vertex is a candidate when the polyline turns by more than the
    threshold within ``max_lag`` vertices.  Candidates near another part of
    the curve (a different polyline, or the same one far away along the arc)
    are discarded: those are crossings resolved as hairpins by the grid.
    Loops smaller than two cells are ignored in that test.
    """
    h = trace.cell
    pts_all, owner, arcpos = [], [], []
    # loops under two cells across are hairpin tips cut off by the sign grid
    fragment = [np.ptp(p, axis=0).max() < 2 * h for p in trace.polylines]
    for li, poly in enumerate(trace.polylines):
        if fragment[li]:
            poly = poly[:0]
        seg = np.linalg.norm(np.diff(poly, axis=0), axis=1)
        pts_all.append(poly)
        owner.append(np.full(len(poly), li))
        arcpos.append(np.concatenate([[0.0], np.cumsum(seg)])[:len(poly)] if len(poly) else np.zeros(0))
    if not pts_all:
        return []
    P_all = np.concatenate(pts_all)
    O_all = np.concatenate(owner)
    A_all = np.concatenate(arcpos)

    found: list = []
    for li, poly in enumerate(trace.polylines):
        if fragment[li]:
            continue
        closed = trace.closed[li] if li < len(trace.closed) else False
        body = poly[:-1] if closed else poly
        m = len(body)
        if m < 3:
            continue
        best_angle = np.zeros(m)
        best_conf = np.zeros(m)
        for k in range(1, max_lag + 1):
            idx = np.arange(m)
            if closed:
                prv, nxt = body[(idx - k) % m], body[(idx + k) % m]
                valid = np.ones(m, bool) if m > 2 * k else np.zeros(m, bool)
            else:
                prv = body[np.clip(idx - k, 0, m - 1)]
                nxt = body[np.clip(idx + k, 0, m - 1)]
                valid = (idx - k >= 0) & (idx + k < m)
            u, v = body - prv, nxt - body
            ang = np.where(valid, _turning(u, v), 0.0)
            nu, nv = np.linalg.norm(u, axis=1), np.linalg.norm(v, axis=1)
            with np.errstate(invalid="ignore", divide="ignore"):
                conf = np.nan_to_num(np.minimum(nu, nv) / np.maximum(nu, nv))
            better = ang > best_angle
            best_angle = np.where(better, ang, best_angle)
            best_conf = np.where(better, conf, best_conf)
        cand = np.nonzero(best_angle > angle_threshold)[0]
        if not len(cand):
            continue
        # group consecutive candidates, keep the sharpest of each group
        groups, cur = [], [cand[0]]
        for c in cand[1:]:
            if c - cur[-1] <= max_lag:
                cur.append(c)
            else:
                groups.append(cur)
                cur = [c]
        groups.append(cur)
        if closed and len(groups) > 1 and groups[0][0] + m - groups[-1][-1] <= max_lag:
            groups[0] = groups.pop() + groups[0]
        total = arcpos[li][-1] if len(arcpos[li]) else 0.0
        for g in groups:
            i = max(g, key=lambda t: best_angle[t])
            p = body[i]
            near = np.linalg.norm(P_all - p, axis=1) < isolation_cells * h
            arc_here = arcpos[li][i]
            other = near & (O_all != li)
            same = near & (O_all == li)
            d_arc = np.abs(A_all[same] - arc_here)
            if closed:
                d_arc = np.minimum(d_arc, total - d_arc)
            if other.any() or (d_arc > arc_cells * h).any():
                continue
            found.append(Cusp(float(p[0]), float(p[1]), float(best_angle[i]), float(best_conf[i])))
    # deduplicate within one grid cell
    out: list = []
    for c in sorted(found, key=lambda c: -c.angle):
        if all(np.hypot(c.x - d.x, c.y - d.y) > h for d in out):
            out.append(c)
    return sorted(out, key=lambda c: (round(c.x, 9), round(c.y, 9)))
