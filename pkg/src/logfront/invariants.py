"""Numerical invariants of curves in the torus and of their log-fronts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .lattice import (
    LatticePolygon,
    MarkedPolygon,
    area,
    epsilon_pairing,
    minkowski_combine,
    mixed_volume,
    polygon_metrics,
)


class InvariantError(ValueError):
    code = "invariants.error"


class DegenerateCurve(InvariantError):
    code = "invariants.degenerate"


class InconsistentProfile(InvariantError):
    code = "invariants.inconsistent"


def _half(x: int, what: str) -> int:
    if x % 2:
        raise InconsistentProfile(f"{what} is not an integer ({x}/2)")
    return x // 2


# --- profiles --------------------------------------------------------------------

@dataclass(frozen=True)
class SingularPoint:
    """Local data of one singular point.

    ``coords`` optionally pins the point at rational torus coordinates
    (used to strip dilate factors during elimination).
    """

    m: int
    mu: int
    beta: int
    real: bool = False
    conj_branch_pairs: int = 0
    local_nodal: int = 0
    local_nodal_rr: int = 0
    coords: Optional[tuple] = None

    def __post_init__(self):
        if self.beta < 1 or self.m < self.beta:
            raise InconsistentProfile(f"need m >= beta >= 1, got m={self.m}, beta={self.beta}")
        if self.mu < 0 or (self.mu + self.beta - 1) % 2:
            raise InconsistentProfile(f"mu + beta - 1 must be even and >= 0 (mu={self.mu}, beta={self.beta})")
        if self.local_nodal_rr > self.local_nodal:
            raise InconsistentProfile("real-real nodal part exceeds local nodal number")
        if not self.real and (self.conj_branch_pairs or self.local_nodal_rr):
            raise InconsistentProfile("real branch data on a non-real point")
        if 2 * self.conj_branch_pairs > self.beta:
            raise InconsistentProfile("more conjugate branch pairs than branches")

    @property
    def cuspidal(self) -> int:
        return self.m - self.beta

    @classmethod
    def node(cls, real: bool = True, solitary: bool = False, coords=None) -> "SingularPoint":
        return cls(2, 1, 2, real, 1 if solitary else 0, 1, 0 if solitary or not real else 1, coords)

    @classmethod
    def cusp(cls, real: bool = True, coords=None) -> "SingularPoint":
        return cls(2, 2, 1, real, 0, 0, 0, coords)


@dataclass(frozen=True)
class BoundaryEdge:
    parts: tuple
    real_simple: int = 0
    real_mult_excess: int = 0


@dataclass(frozen=True)
class BoundaryProfile:
    edges: tuple = ()

    @property
    def simple(self) -> int:
        """|dP|: number of distinct boundary points."""
        return sum(len(e.parts) for e in self.edges)

    @property
    def nodal(self) -> int:
        """b(dP): multiplicities summed minus distinct count."""
        return sum(sum(e.parts) - len(e.parts) for e in self.edges)

    @property
    def nodal_real(self) -> int:
        return sum(e.real_mult_excess for e in self.edges)

    @classmethod
    def from_marked(cls, mp: MarkedPolygon, real_simple: Sequence[int] = ()) -> "BoundaryProfile":
        rs = list(real_simple) + [0] * (len(mp.edges) - len(real_simple))
        return cls(tuple(BoundaryEdge(e.marking.parts, r) for e, r in zip(mp.edges, rs)))


@dataclass(frozen=True)
class SingularityProfile:
    points: tuple = ()
    irreducible: bool = True
    boundary: Optional[BoundaryProfile] = None

    def to_json(self) -> dict:
        out = {"irreducible": self.irreducible, "points": []}
        for p in self.points:
            rec = {"m": p.m, "mu": p.mu, "beta": p.beta, "real": p.real,
                   "conj_branch_pairs": p.conj_branch_pairs, "local_nodal": p.local_nodal,
                   "local_nodal_rr": p.local_nodal_rr}
            if p.coords is not None:
                rec["coords"] = [str(Fraction(c)) for c in p.coords]
            out["points"].append(rec)
        if self.boundary is not None:
            out["boundary"] = {"edges": [
                {"parts": list(e.parts), "real_simple": e.real_simple,
                 "real_mult_excess": e.real_mult_excess} for e in self.boundary.edges]}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SingularityProfile":
        if not isinstance(data, dict):
            raise InconsistentProfile("malformed profile: expected a JSON object")
        try:
            pts = []
            for rec in data.get("points", []):
                coords = rec.get("coords")
                pts.append(SingularPoint(
                    int(rec["m"]), int(rec["mu"]), int(rec["beta"]), bool(rec.get("real", False)),
                    int(rec.get("conj_branch_pairs", 0)), int(rec.get("local_nodal", 0)),
                    int(rec.get("local_nodal_rr", 0)),
                    tuple(Fraction(str(c)) for c in coords) if coords is not None else None))
            boundary = None
            if "boundary" in data:
                boundary = BoundaryProfile(tuple(
                    BoundaryEdge(tuple(int(x) for x in e["parts"]), int(e.get("real_simple", 0)),
                                 int(e.get("real_mult_excess", 0)))
                    for e in data["boundary"]["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvariantError):
                raise
            raise InconsistentProfile(f"malformed profile: {exc}") from exc
        return cls(tuple(pts), bool(data.get("irreducible", True)), boundary)


SMOOTH = SingularityProfile()


@dataclass(frozen=True)
class CurveInvariants:
    deg_gauss: int
    euler_char: int
    genus: int
    inflections: int
    c: int
    c_re: int
    c_im: int
    b: int
    b_re_plus: int
    b_re_minus: int
    b_im: int
    boundary_simple: int
    boundary_nodal: int
    boundary_nodal_real: int

    def to_json(self) -> dict:
        return asdict(self)


# --- single curve ---------------------------------------------------------------

def log_gauss_degree(interior: int, boundary_simple: int, profile: SingularityProfile = SMOOTH,
                     *, allow_zero: bool = False) -> int:
    """Degree of the logarithmic Gauss map.

    Binomial curves (segment Newton polygon) have constant Gauss map and
    degree 0; pass ``allow_zero`` to accept them.
    """
    d = 2 * interior + boundary_simple - 2 - sum(p.mu + p.m - 1 for p in profile.points)
    if d < 0 or (d == 0 and not allow_zero):
        raise DegenerateCurve(f"degenerate curve: log-Gauss degree {d}")
    return d


def geometric_genus(interior: int, profile: SingularityProfile = SMOOTH) -> int:
    delta2 = sum(p.mu + p.beta - 1 for p in profile.points)
    g = interior - _half(delta2, "delta invariant")
    if g < 0:
        raise InconsistentProfile(f"negative genus {g}")
    return g


def euler_characteristic(interior: int, profile: SingularityProfile = SMOOTH) -> int:
    return 2 - 2 * geometric_genus(interior, profile)


def inflection_count(deg_gauss: int, chi: int) -> int:
    return 2 * deg_gauss - chi


def tangency_multiplicity(intersection_mult: int, m1: int, m2: int) -> int:
    if m1 < 1 or m2 < 1 or intersection_mult < m1 * m2:
        raise InvariantError("intersection data inconsistent")
    return intersection_mult - m1 * m2


def cuspidal_nodal_numbers(profile: SingularityProfile, boundary: Optional[BoundaryProfile] = None,
                           *, deg_gauss: Optional[int] = None, chi: Optional[int] = None) -> dict:
    """Cuspidal and nodal numbers with their real refinements.

    When ``deg_gauss`` and ``chi`` are given, the cusp total is checked
    against the value forced by the Gauss degree and the Euler characteristic.
    """
    pts = profile.points
    c = sum(p.cuspidal for p in pts)
    c_re = sum(p.cuspidal for p in pts if p.real)
    b = sum(p.local_nodal for p in pts)
    b_plus = sum(p.conj_branch_pairs for p in pts if p.real)
    b_minus = sum(p.local_nodal_rr for p in pts if p.real)
    if b_plus + b_minus > b:
        raise InconsistentProfile("real nodal refinements exceed the nodal number")
    boundary = boundary or profile.boundary or BoundaryProfile()
    if deg_gauss is not None and chi is not None:
        forced = -deg_gauss - (chi - boundary.simple)
        if forced != c:
            raise InconsistentProfile(f"cusp count {c} disagrees with Gauss degree and Euler characteristic ({forced})")
    bn, bnr = boundary.nodal, boundary.nodal_real
    if not 0 <= bnr <= bn:
        raise InconsistentProfile("real boundary excess out of range")
    return {"c": c, "c_re": c_re, "c_im": c - c_re, "b": b, "b_re_plus": b_plus,
            "b_re_minus": b_minus, "b_im": b - b_plus - b_minus,
            "b_boundary": bn, "b_boundary_re": bnr}


def curve_invariants(marked: MarkedPolygon, profile: SingularityProfile = SMOOTH,
                     *, allow_zero: bool = False) -> CurveInvariants:
    """All single-curve numbers from the marked Newton polygon and a profile."""
    if profile.boundary is not None:
        given = [tuple(e.parts) for e in profile.boundary.edges]
        actual = [e.marking.parts for e in marked.edges]
        if given != actual:
            raise InconsistentProfile(f"profile boundary markings {given} differ from the polygon's {actual}")
        boundary = profile.boundary
    else:
        boundary = BoundaryProfile.from_marked(marked)
    interior = polygon_metrics(marked.polygon).interior
    deg = log_gauss_degree(interior, boundary.simple, profile, allow_zero=allow_zero)
    chi = euler_characteristic(interior, profile)
    n = cuspidal_nodal_numbers(profile, boundary, deg_gauss=deg, chi=chi)
    return CurveInvariants(
        deg, chi, (2 - chi) // 2, inflection_count(deg, chi),
        n["c"], n["c_re"], n["c_im"], n["b"], n["b_re_plus"], n["b_re_minus"], n["b_im"],
        boundary.simple, n["b_boundary"], n["b_boundary_re"])


# --- log-front counts ------------------------------------------------------------

def logfront_gauss_degree(deg_p: int, deg_q: int) -> int:
    return deg_p * deg_q


def logfront_euler(deg_p: int, deg_q: int, chi_p: int, chi_q: int,
                   coincidences: Sequence[tuple] = ()) -> tuple:
    """(chi of the fibre product, chi of its normalization)."""
    hat = -2 * deg_p * deg_q + chi_p * deg_q + chi_q * deg_p
    for nu_p, nu_q in coincidences:
        if nu_p < 1 or nu_q < 1:
            raise InvariantError("ramification orders must be positive")
    return hat, hat + sum(gcd(a, b) - 1 for a, b in coincidences)


def logfront_cuspidal(chi_r: int, boundary_r: int, chi_p: int, c_p: int, bd_p: int,
                      chi_q: int, c_q: int, bd_q: int) -> int:
    return -chi_r + boundary_r - (chi_p + c_p - bd_p) * (chi_q + c_q - bd_q)


def logfront_nodal(interior_r: int, genus_r: int, c_r: int) -> int:
    n = interior_r - genus_r - c_r
    if n < 0:
        raise InvariantError(f"negative node count {n}: singularities beyond nodes and cusps")
    return n


@dataclass(frozen=True)
class GenericReport:
    d_p: int
    d_q: int
    degenerate: bool
    euler: Optional[int]
    genus: Optional[int]
    cusps: Optional[int]
    nodes: Optional[int]
    hexagon_sides: tuple
    raw: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self) | {"hexagon_sides": list(self.hexagon_sides)}


def generic_degree_report(d_p: int, d_q: int) -> GenericReport:
    """Closed forms for generic curves of degrees d_p and d_q."""
    if d_p < 1 or d_q < 1:
        raise InvariantError("degrees must be positive")
    p, q = d_p, d_q
    chi = -p * q * (4 * p * q - 3 * p - 3 * q)
    cusps = 3 * p * p * q * q - 6 * p * q
    nodes2 = p**4 * q**2 + 4 * p**3 * q**3 + p**2 * q**4 - 6 * p**3 * q**2 - 6 * p**2 * q**3 \
        - 4 * p**2 * q**2 + 18 * p * q
    nodes = _half(nodes2, "generic node count")
    sides = (p * q * (q - 1), q * p * (p - 1)) * 3
    raw = {"euler": chi, "cusps": cusps, "nodes": nodes}
    bad = (p == 1 and q == 1) or cusps < 0 or nodes < 0 or chi > 2
    if bad:
        return GenericReport(p, q, True, None, None, None, None, sides, raw)
    return GenericReport(p, q, False, chi, _half(2 - chi, "genus"), cusps, nodes, sides, raw)


# --- real (Klein-type) counts ------------------------------------------------------

def klein_sum(dP: LatticePolygon, dQ: LatticePolygon, inv_p: CurveInvariants,
              inv_q: CurveInvariants) -> int:
    """2 b+_Re(R) + c_Re(R) for P simple Harnack and Q immersed near the boundary."""
    n = len(minkowski_combine([(1, dQ, False), (1, dP, True)]).vertices)
    mv = mixed_volume(dP, dQ)
    perim_q = polygon_metrics(dQ).lattice_perimeter
    real_p = 2 * inv_p.b_re_plus + inv_p.boundary_nodal_real
    real_q = 2 * inv_q.b_re_plus + inv_q.boundary_nodal_real
    total = ((4 - 2 * n) * mv
             + 2 * area(dP) * (perim_q - inv_q.euler_char + real_q - inv_q.c_im)
             - real_p * (real_q + inv_q.c_re)
             + epsilon_pairing(dP, dQ))
    if Fraction(total).denominator != 1:
        raise InconsistentProfile(f"non-integral Klein sum {total}")
    return int(total)


def klein_generic(d_p: int, d_q: int) -> int:
    if d_p < 1 or d_q < 1:
        raise InvariantError("degrees must be positive")
    if d_p == 1 and d_q == 1:
        raise DegenerateCurve("degenerate: two lines have no tangency in the torus")
    return d_p * d_p * d_q * d_q - 2 * d_p * d_q


def classical_klein_check(d: int, d_star: int, q_b_plus: int, q_c_re: int,
                          r_b_plus: int, r_c_re: int) -> int:
    """Residual of the classical Klein identity; 0 when it holds."""
    return (d - 2 * q_b_plus - q_c_re) - (d_star - 2 * r_b_plus - r_c_re)
