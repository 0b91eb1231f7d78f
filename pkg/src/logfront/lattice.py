"""Lattice polygons, partition markings, and the log-front polygon prediction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import atan2, gcd
from typing import Sequence

from .exactalg import SparsePoly, squarefree_decomposition


class LatticeError(ValueError):
    code = "lattice.error"


class PolygonCollapse(LatticeError):
    """An edge would be shortened below zero length."""

    code = "lattice.collapse"


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _primitive(v) -> tuple:
    g = gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon, counterclockwise from its lexicographic minimum.

    Segments and points are allowed (``degenerate`` is True).  A segment has
    two edges, one per side, so edge vectors always sum to zero.
    """

    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(int(c) for c in v) for v in self.vertices)
        if not verts:
            raise LatticeError("empty polygon")
        start = min(range(len(verts)), key=lambda i: verts[i])
        base = verts[start]
        verts = verts[start:] + verts[:start]
        verts = tuple((x - base[0], y - base[1]) for x, y in verts)
        n = len(verts)
        if n >= 3:
            for i in range(n):
                if _cross(verts[i - 1], verts[i], verts[(i + 1) % n]) <= 0:
                    raise LatticeError("vertices not strictly convex counterclockwise")
        elif n == 2 and verts[0] == verts[1]:
            raise LatticeError("repeated vertex")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def hull(cls, points) -> "LatticePolygon":
        """Convex hull (monotone chain) of lattice points."""
        pts = sorted(set((int(x), int(y)) for x, y in points))
        if not pts:
            raise LatticeError("empty point set")
        if len(pts) <= 2:
            return cls(tuple(pts))
        lower, upper = [], []
        for p in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        ring = lower[:-1] + upper[:-1]
        if len(ring) == 2 or all(_cross(ring[0], ring[1], p) == 0 for p in ring):
            return cls((pts[0], pts[-1]))
        return cls(tuple(ring))

    @classmethod
    def from_edges(cls, vectors) -> "LatticePolygon":
        """Polygon whose boundary is the given edge vectors (summing to zero)."""
        vecs = [tuple(v) for v in vectors if v[0] or v[1]]
        if sum(v[0] for v in vecs) or sum(v[1] for v in vecs):
            raise LatticeError("edge vectors do not close up")
        if not vecs:
            return cls(((0, 0),))
        vecs = _merge_parallel(sorted(vecs, key=_angle))
        pts = [(0, 0)]
        for v in vecs[:-1]:
            pts.append((pts[-1][0] + v[0], pts[-1][1] + v[1]))
        if len(vecs) == 2:
            return cls.hull(pts + [(0, 0)])
        return cls(tuple(pts))

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def edge_vectors(self) -> list:
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            d = (v[1][0] - v[0][0], v[1][1] - v[0][1])
            return [d, (-d[0], -d[1])]
        return [(v[(i + 1) % len(v)][0] - v[i][0], v[(i + 1) % len(v)][1] - v[i][1])
                for i in range(len(v))]

    def edges(self) -> list:
        """List of (start vertex, edge vector, lattice length, direction, outward normal)."""
        out = []
        starts = list(self.vertices) if len(self.vertices) > 2 else list(self.vertices)[:2]
        for start, vec in zip(starts, self.edge_vectors()):
            length = gcd(abs(vec[0]), abs(vec[1]))
            d = (vec[0] // length, vec[1] // length)
            out.append((start, vec, length, d, (d[1], -d[0])))
        return out

    def reflect(self) -> "LatticePolygon":
        return LatticePolygon.hull([(-x, -y) for x, y in self.vertices])

    def scale(self, k: int) -> "LatticePolygon":
        if k < 0:
            raise LatticeError("negative scale")
        if k == 0:
            return LatticePolygon(((0, 0),))
        return LatticePolygon(tuple((k * x, k * y) for x, y in self.vertices))

    def points(self) -> list:
        """All lattice points of the polygon (boundary included)."""
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        out = []
        for x in range(min(xs), max(xs) + 1):
            for y in range(min(ys), max(ys) + 1):
                if self.contains((x, y)):
                    out.append((x, y))
        return out

    def contains(self, p) -> bool:
        v = self.vertices
        if len(v) == 1:
            return tuple(p) == v[0]
        if len(v) == 2:
            return _cross(v[0], v[1], p) == 0 and min(v[0], v[1]) <= tuple(p) <= max(v[0], v[1])
        return all(_cross(v[i], v[(i + 1) % len(v)], p) >= 0 for i in range(len(v)))

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}


def _angle(v) -> float:
    a = atan2(v[1], v[0])
    return a if a >= 0 else a + 6.283185307179586


def _merge_parallel(vecs: list) -> list:
    out = []
    for v in vecs:
        if out and _primitive(out[-1]) == _primitive(v):
            out[-1] = (out[-1][0] + v[0], out[-1][1] + v[1])
        else:
            out.append(v)
    return out


# --- Newton polygons and metrics --------------------------------------------

def _zw_support(p: SparsePoly) -> list:
    bad = set(p.used_vars()) - {"z", "w", "a", "b"}
    if bad:
        raise LatticeError(f"Newton polygon needs a bivariate polynomial, got {sorted(bad)}")
    used = [v for v in p.used_vars()]
    if len(used) > 2 or (set(used) - {"z", "w"} and set(used) - {"a", "b"}):
        raise LatticeError("Newton polygon needs variables (z, w) or (a, b)")
    x, y = ("a", "b") if set(used) & {"a", "b"} else ("z", "w")
    q = p.embed((x, y))
    ix, iy = q.vars.index(x), q.vars.index(y)
    return [(e[ix], e[iy]) for e in q.terms], (x, y)


def newton_polygon(p: SparsePoly) -> LatticePolygon:
    """Convex hull of the exponent support (variables (z, w) or (a, b))."""
    if p.is_zero():
        raise LatticeError("zero polynomial has no Newton polygon")
    pts, _ = _zw_support(p)
    return LatticePolygon.hull(pts)


@dataclass(frozen=True)
class PolygonMetrics:
    area2: int
    interior: int
    lattice_perimeter: int
    vertex_count: int


def polygon_metrics(poly: LatticePolygon) -> PolygonMetrics:
    """Twice the area (shoelace), interior points (Pick), lattice perimeter."""
    v = poly.vertices
    perim = sum(e[2] for e in poly.edges())
    if poly.degenerate:
        return PolygonMetrics(0, 0, perim, len(v))
    area2 = sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1]
                for i in range(len(v)))
    interior = (area2 - perim) // 2 + 1
    return PolygonMetrics(area2, interior, perim, len(v))


def area(poly: LatticePolygon) -> Fraction:
    return Fraction(polygon_metrics(poly).area2, 2)


def minkowski_combine(parts: Sequence) -> LatticePolygon:
    """Minkowski sum of ``(scale, polygon, reflect)`` triples by edge merging."""
    if not parts:
        raise LatticeError("empty Minkowski combination")
    vecs = []
    for k, poly, reflect in parts:
        if k < 0:
            raise LatticeError("negative Minkowski scale")
        sgn = -1 if reflect else 1
        vecs.extend((sgn * k * x, sgn * k * y) for x, y in poly.edge_vectors())
    return LatticePolygon.from_edges(vecs)


def mixed_volume(p1: LatticePolygon, p2: LatticePolygon) -> Fraction:
    """Area(p1 + p2) - Area(p1) - Area(p2)."""
    s = minkowski_combine([(1, p1, False), (1, p2, False)])
    return area(s) - area(p1) - area(p2)


def epsilon_pairing(p1: LatticePolygon, p2: LatticePolygon) -> int:
    """Sum over ordered side pairs of the parallelogram area |E x F|."""
    return sum(abs(e[0] * f[1] - e[1] * f[0])
               for e in _sides(p1) for f in _sides(p2))


def _sides(p: LatticePolygon) -> list:
    # a segment has one geometric side even though it carries two edges
    vecs = p.edge_vectors()
    return vecs[:1] if len(vecs) == 2 else vecs


# --- partitions and markings --------------------------------------------------

@dataclass(frozen=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(sorted((int(x) for x in self.parts), reverse=True))
        if any(x <= 0 for x in parts):
            raise LatticeError("partition parts must be positive")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x > i)
                               for i in range(self.parts[0])))

    def __iter__(self):
        return iter(self.parts)


def partition_pairing(lam, mu) -> int:
    """<lam, mu> from conjugate parts and from pairwise minima (must agree)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    mu = mu if isinstance(mu, Partition) else Partition(tuple(mu))
    via_min = sum(min(x, y) for x in lam.parts for y in mu.parts)
    lc, mc = lam.conjugate().parts, mu.conjugate().parts
    via_conj = sum(x * y for x, y in zip(lc, mc))
    if via_min != via_conj:  # pragma: no cover - combinatorial identity
        raise AssertionError(f"pairing formulas disagree: {via_min} != {via_conj}")
    return via_min


@dataclass(frozen=True)
class MarkedEdge:
    length: int
    direction: tuple
    normal: tuple
    marking: Partition


@dataclass(frozen=True)
class MarkedPolygon:
    polygon: LatticePolygon
    edges: tuple = field(default=())

    def __post_init__(self):
        geo = self.polygon.edges()
        if len(geo) != len(self.edges):
            raise LatticeError("marking count does not match edge count")
        for (_, _, length, d, n), e in zip(geo, self.edges):
            if e.length != length or tuple(e.direction) != d or tuple(e.normal) != n:
                raise LatticeError("marked edge does not match polygon geometry")
            if e.marking.size != length:
                raise LatticeError(f"marking {e.marking.parts} does not partition edge length {length}")

    @classmethod
    def with_markings(cls, polygon: LatticePolygon, markings) -> "MarkedPolygon":
        edges = []
        for (_, _, length, d, n), parts in zip(polygon.edges(), markings):
            edges.append(MarkedEdge(length, d, n, Partition(tuple(parts))))
        return cls(polygon, tuple(edges))

    @classmethod
    def transverse(cls, polygon: LatticePolygon) -> "MarkedPolygon":
        """Every boundary point simple: each edge marked (1, ..., 1)."""
        return cls.with_markings(polygon, [(1,) * e[2] for e in polygon.edges()])

    def reflect(self) -> "MarkedPolygon":
        refl = self.polygon.reflect()
        by_normal = {e.normal: e.marking for e in self.edges}
        edges = []
        for _, _, length, d, n in refl.edges():
            edges.append(MarkedEdge(length, d, n, by_normal[(-n[0], -n[1])]))
        return MarkedPolygon(refl, tuple(edges))

    @property
    def boundary_simple(self) -> int:
        """Number of distinct boundary points, sum of marking lengths."""
        return sum(e.marking.length for e in self.edges)

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.polygon.vertices],
            "markings": [{"edge": i, "parts": list(e.marking.parts)}
                         for i, e in enumerate(self.edges)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MarkedPolygon":
        poly = LatticePolygon(tuple(tuple(v) for v in data["vertices"]))
        geo = poly.edges()
        marks = [None] * len(geo)
        for m in data.get("markings", []):
            marks[int(m["edge"])] = tuple(m["parts"])
        marks = [m if m is not None else (1,) * g[2] for m, g in zip(marks, geo)]
        return cls.with_markings(poly, marks)


def edge_polynomial(p: SparsePoly, edge) -> SparsePoly:
    """Univariate f(t) with P|_E = monomial * f(t), f(0) != 0, deg f = |E|."""
    start, vec, length, d, _ = edge
    pts_vars = _zw_support(p)
    _, (x, y) = pts_vars
    q = p.embed((x, y))
    ix, iy = q.vars.index(x), q.vars.index(y)
    terms = {}
    for e, c in q.terms.items():
        rel = (e[ix] - start[0], e[iy] - start[1])
        if rel[0] * d[1] - rel[1] * d[0]:
            continue
        k = rel[0] // d[0] if d[0] else rel[1] // d[1]
        if 0 <= k <= length:
            terms[(k,)] = c
    return SparsePoly(("t",), terms)


def edge_marking(p: SparsePoly) -> MarkedPolygon:
    """Mark each edge with the multiplicities of P's boundary points on it.

    Segments (binomial curves) are accepted and marked on both sides.
    """
    if p.is_zero():
        raise LatticeError("zero polynomial")
    pts, _ = _zw_support(p)
    base = min(pts)
    poly = LatticePolygon.hull(pts)
    if len(poly.vertices) < 2:
        raise LatticeError("degenerate (point) Newton polygon has no edges")
    markings = []
    for start, vec, length, d, n in poly.edges():
        edge = ((start[0] + base[0], start[1] + base[1]), vec, length, d, n)
        f = edge_polynomial(p, edge)
        if f.degree("t") != length or f.coefficient({"t": 0}) == 0:
            raise LatticeError("edge polynomial degree mismatch")  # pragma: no cover
        parts = []
        for g, k in squarefree_decomposition(f, "t"):
            parts.extend([k] * g.degree("t"))
        markings.append(tuple(parts))
    return MarkedPolygon.with_markings(poly, markings)


# --- log-front polygon prediction ---------------------------------------------

@dataclass(frozen=True)
class DirectionReport:
    """Per outward normal: Minkowski length, subtraction, |G| marking."""

    normal: tuple
    minkowski_length: int
    subtracted: int
    length: int
    parts: tuple


@dataclass(frozen=True)
class PolygonPrediction:
    marked: MarkedPolygon
    directions: tuple
    boundary_derived: int
    boundary_as_printed: int


def _by_normal(mp: MarkedPolygon) -> dict:
    out = {}
    for e in mp.edges:
        if e.normal in out:  # pragma: no cover - convexity forbids it
            raise LatticeError("two edges share an outward normal")
        out[e.normal] = e
    return out


def predict_logfront(dP: MarkedPolygon, dQ: MarkedPolygon, deg_p: int, deg_q: int) -> PolygonPrediction:
    """Newton polygon of P / Q with edge markings.

    Uses ``deg_q * dP + deg_p * (-dQ)`` shortened by <lam(E), lam(F)> along
    every pair of opposite edges, and independently assembles each edge's
    marking from tangency contributions; both routes must agree.
    """
    if deg_p < 0 or deg_q < 0:
        raise LatticeError("log-Gauss degrees must be nonnegative")
    mQ = dQ.reflect()
    eP, eQ = _by_normal(dP), _by_normal(mQ)
    empty = MarkedEdge(0, (0, 0), (0, 0), Partition())
    normals = sorted(set(eP) | set(eQ), key=lambda n: _angle((-n[1], n[0])))
    reports = []
    vectors = []
    printed_sub = 0
    for n in normals:
        opp = (-n[0], -n[1])
        E, Eb = eP.get(n, empty), eP.get(opp, empty)
        F, Fb = eQ.get(n, empty), eQ.get(opp, empty)
        mink = deg_q * E.length + deg_p * F.length
        sub = partition_pairing(E.marking, Fb.marking) + partition_pairing(Eb.marking, F.marking)
        printed_sub += partition_pairing(E.marking, Fb.marking)
        length = mink - sub
        if length < 0:
            raise PolygonCollapse(f"edge with normal {n} shortened below zero ({mink} - {sub})")
        finite_e = deg_q - F.marking.length - Fb.marking.length
        finite_f = deg_p - E.marking.length - Eb.marking.length
        if (E.length and finite_e < 0) or (F.length and finite_f < 0):
            raise PolygonCollapse(f"more boundary tangencies than the Gauss degree allows at normal {n}")
        parts = []
        parts += [x for x in E.marking.parts for _ in range(max(finite_e, 0))]
        parts += [y for y in F.marking.parts for _ in range(max(finite_f, 0))]
        parts += [x + y for x in E.marking.parts for y in F.marking.parts]
        parts += [x - y for x in E.marking.parts for y in Fb.marking.parts if x > y]
        parts += [x - y for x in F.marking.parts for y in Eb.marking.parts if x > y]
        if sum(parts) != length:  # pragma: no cover - identity of the two routes
            raise AssertionError(f"marking sum {sum(parts)} != edge length {length} at normal {n}")
        reports.append(DirectionReport(n, mink, sub, length, tuple(sorted(parts, reverse=True))))
        if length:
            d = (-n[1], n[0])
            vectors.append((d[0] * length, d[1] * length))
    polygon = LatticePolygon.from_edges(vectors)
    by_n = {r.normal: r for r in reports}
    edges = []
    for _, _, length, d, n in polygon.edges():
        r = by_n[n]
        edges.append(MarkedEdge(length, d, n, Partition(r.parts)))
    marked = MarkedPolygon(polygon, tuple(edges))
    # a point polygon has no edges; the corresponding parts are all empty
    derived = sum(len(r.parts) for r in reports if r.length)
    printed = (deg_p * sum(e.length for e in dQ.edges)
               + deg_q * sum(e.length for e in dP.edges) - printed_sub)
    return PolygonPrediction(marked, tuple(reports), derived, printed)


def predict_logfront_polygon(dP: MarkedPolygon, dQ: MarkedPolygon, deg_p: int, deg_q: int) -> MarkedPolygon:
    return predict_logfront(dP, dQ, deg_p, deg_q).marked


def predict_boundary_count(dP: MarkedPolygon, dQ: MarkedPolygon, deg_p: int, deg_q: int) -> tuple:
    """(derived, as_printed) boundary point counts of the log-front."""
    pred = predict_logfront(dP, dQ, deg_p, deg_q)
    return pred.boundary_derived, pred.boundary_as_printed
