"""Elimination pipeline computing the log-front of two curves in the torus.

The log-front P / Q is the curve of dilations (a, b) for which
P(a z, b w) and Q(z, w) are tangent somewhere in the torus.  It is obtained
by eliminating (z, w) from {P(az, bw), Q, Wronskian} with two resultants,
keeping the multiplicity-one part and removing factors known to be spurious.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .exactalg import (
    SparsePoly,
    content,
    dilate,
    format_poly,
    normalize,
    partial_derivative,
    poly_gcd,
    poly_to_json,
    rename,
    resultant,
    squarefree_full,
    strip_monomial,
    wronskian,
)
from .exactalg.poly import NotDivisibleError, coefficient_in
from .invariants import SMOOTH, SingularityProfile, curve_invariants
from .lattice import (
    LatticeError,
    LatticePolygon,
    MarkedPolygon,
    edge_marking,
    newton_polygon,
    predict_logfront,
)

DEFAULT_DEGREE_BOUND = 64

# elimination order: (first variable eliminated, second variable eliminated)
ORDERS = {"w": ("w", "z"), "z": ("z", "w")}


class PipelineError(ValueError):
    code = "logfront.error"


class DegreeBoundExceeded(PipelineError):
    code = "logfront.degree_bound"


class PreconditionViolation(PipelineError):
    code = "logfront.precondition"


def _check_curve(p: SparsePoly, name: str) -> SparsePoly:
    if p.is_zero():
        raise PipelineError(f"{name} is the zero polynomial")
    extra = set(p.used_vars()) - {"z", "w"}
    if extra:
        raise PipelineError(f"{name} must be a polynomial in z, w (found {sorted(extra)})")
    return p


def _bound(p: SparsePoly, bound: Optional[int], stage: str) -> None:
    if bound is not None and p.degree() > bound:
        raise DegreeBoundExceeded(f"{stage} has total degree {p.degree()} > bound {bound}")


def tangency_scheme(P: SparsePoly, Q: SparsePoly) -> tuple:
    """(P(az, bw), Q, Wronskian) cutting out the tangency correspondence."""
    _check_curve(P, "P")
    _check_curve(Q, "Q")
    pd = dilate(P)
    return pd, Q, wronskian(pd, Q)


def compute_R1(P: SparsePoly, Q: SparsePoly, order: str = "w", method: str = "subresultant",
               degree_bound: Optional[int] = DEFAULT_DEGREE_BOUND) -> tuple:
    """Resultant of P(az, bw) and Q in the first variable, content removed.

    Returns ``(R1, removed_content)``.
    """
    first, keep = ORDERS[order]
    pd, q, _ = tangency_scheme(P, Q)
    if q.degree(first) < 1:
        raise PipelineError(f"Q is constant in {first}; eliminate in the other order")
    r1 = resultant(pd, q, first, method)
    if r1.is_zero():
        raise PreconditionViolation("P(az, bw) and Q share a component for all dilations")
    _bound(r1, degree_bound, "R1")
    c = content(r1, keep)
    r1 = normalize(r1 / c)
    return r1, c


def compute_R2(R1: SparsePoly, order: str = "w", method: str = "subresultant",
               degree_bound: Optional[int] = DEFAULT_DEGREE_BOUND) -> SparsePoly:
    """Resultant of R1 and its derivative in the remaining torus variable."""
    v = ORDERS[order][1]
    if R1.degree(v) < 1:
        raise PipelineError(f"no {v}-dependence in R1")
    r2 = resultant(R1, partial_derivative(R1, v), v, method)
    _bound(r2, degree_bound, "R2")
    return normalize(r2)


def _leading_coefficient(R1: SparsePoly, v: str) -> SparsePoly:
    return coefficient_in(R1, v, R1.degree(v)).trim()


def _dilate_at(curve: SparsePoly, point: tuple, inverse: bool) -> SparsePoly:
    """curve(a z0, b w0), or curve(z0 / a, w0 / b) with denominators cleared."""
    z0, w0 = (Fraction(c) for c in point)
    c = curve.embed(("z", "w"))
    dz, dw = c.degree("z"), c.degree("w")
    terms = {}
    for (i, j), coef in c.terms.items():
        val = coef * z0 ** i * w0 ** j
        if val:
            key = (dz - i, dw - j) if inverse else (i, j)
            terms[key] = terms.get(key, 0) + val
    return SparsePoly(("a", "b"), terms).trim()


@dataclass(frozen=True)
class Removal:
    factor: SparsePoly
    reason: str
    multiplicity: int = 1

    def to_json(self) -> dict:
        return {"factor": poly_to_json(self.factor), "text": format_poly(self.factor),
                "reason": self.reason, "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class LogFrontResult:
    R: SparsePoly
    R1: SparsePoly
    R2: SparsePoly
    sqfree: tuple
    removed: tuple
    polygon_computed: Optional[LatticePolygon]
    polygon_predicted: Optional[LatticePolygon] = None
    match: Optional[bool] = None
    empty: bool = False
    order: str = "w"
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "R": poly_to_json(self.R),
            "R_text": format_poly(self.R),
            "empty": self.empty,
            "R1": poly_to_json(self.R1),
            "R2": poly_to_json(self.R2),
            "sqfree": [{"factor": poly_to_json(f), "text": format_poly(f), "multiplicity": k}
                       for f, k in self.sqfree],
            "removed": [r.to_json() for r in self.removed],
            "polygon_computed": self.polygon_computed.to_json() if self.polygon_computed else None,
            "polygon_predicted": self.polygon_predicted.to_json() if self.polygon_predicted else None,
            "match": self.match,
            "elimination_order": self.order,
        }
        out["provenance"] = {k: (format_poly(v) if isinstance(v, SparsePoly) else v)
                             for k, v in self.provenance.items()}
        return out


def extract_logfront(R2: SparsePoly, P: SparsePoly, Q: SparsePoly,
                     profile_p: SingularityProfile = SMOOTH, profile_q: SingularityProfile = SMOOTH,
                     *, R1: Optional[SparsePoly] = None, order: str = "w") -> LogFrontResult:
    """Strip spurious factors from R2 and canonicalize the log-front."""
    if R2.is_zero():
        raise PreconditionViolation("R2 vanishes identically: tangency is not isolated")
    unit, factors = squarefree_full(R2) if not R2.is_constant() else (R2, [])
    removed = []
    R = SparsePoly.constant(1)
    for f, k in factors:
        if k == 1:
            R = R * f
        else:
            removed.append(Removal(f, "multiplicity>1", k))

    def divide_out(g: SparsePoly, reason: str) -> None:
        nonlocal R
        g, _ = strip_monomial(g)
        g = normalize(g)
        if g.is_constant():
            return
        R = R / g
        removed.append(Removal(g, reason))

    # R2 = lc * discriminant; the leading coefficient is an artifact of the
    # projection, not a tangency locus
    if R1 is not None and not R.is_constant():
        lc = _leading_coefficient(R1, ORDERS[order][1])
        if not lc.is_constant():
            divide_out(poly_gcd(R, lc), "leading-coefficient")
    for pt in profile_q.points:
        if pt.coords is not None and not R.is_constant():
            divide_out(poly_gcd(R, _dilate_at(P, pt.coords, inverse=False)), "dilate-of-P")
    for pt in profile_p.points:
        if pt.coords is not None and not R.is_constant():
            divide_out(poly_gcd(R, _dilate_at(Q, pt.coords, inverse=True)), "dilate-of-Q")
    R, mono = strip_monomial(R)
    if mono:
        removed.append(Removal(_monomial(mono), "monomial"))
    R = normalize(R)
    empty = R.is_constant()
    poly = None if empty else newton_polygon(R)
    return LogFrontResult(R, R1 if R1 is not None else SparsePoly.constant(0), R2,
                          tuple(factors), tuple(removed), poly, empty=empty, order=order,
                          provenance={"sqfree_unit": str(unit)})


def _monomial(exps: dict) -> SparsePoly:
    vars = tuple(sorted(exps, key="abzwt".index))
    return SparsePoly(vars, {tuple(exps[v] for v in vars): 1})


def logfront(P: SparsePoly, Q: SparsePoly, profile_p: SingularityProfile = SMOOTH,
             profile_q: SingularityProfile = SMOOTH, *, order: Optional[str] = None,
             method: str = "subresultant",
             degree_bound: Optional[int] = DEFAULT_DEGREE_BOUND) -> LogFrontResult:
    """Full pipeline: R1, R2 and extraction."""
    _check_curve(P, "P")
    _check_curve(Q, "Q")
    if order is None:
        order = "w" if Q.degree("w") >= 1 else "z"
    r1, c1 = compute_R1(P, Q, order, method, degree_bound)
    first, second = ORDERS[order]
    if r1.degree(second) < 1:
        res = extract_logfront(SparsePoly.constant(1), P, Q, profile_p, profile_q, R1=r1, order=order)
    else:
        r2 = compute_R2(r1, order, method, degree_bound)
        res = extract_logfront(r2, P, Q, profile_p, profile_q, R1=r1, order=order)
    prov = dict(res.provenance)
    prov["R1_content"] = format_poly(c1)
    prov["method"] = method
    return replace(res, provenance=prov)


# --- validation -----------------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostics:
    match: bool
    predicted: Optional[MarkedPolygon]
    deg_gauss_p: int
    deg_gauss_q: int
    boundary_derived: Optional[int]
    boundary_as_printed: Optional[int]
    edge_deltas: tuple
    message: str = ""

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "predicted": self.predicted.to_json() if self.predicted else None,
            "deg_gauss_p": self.deg_gauss_p,
            "deg_gauss_q": self.deg_gauss_q,
            "boundary_count": {"derived": self.boundary_derived, "as_printed": self.boundary_as_printed},
            "edge_deltas": [{"normal": list(n), "computed": c, "predicted": p} for n, c, p in self.edge_deltas],
            "message": self.message,
        }


def _lengths_by_normal(poly: Optional[LatticePolygon]) -> dict:
    if poly is None:
        return {}
    out: dict = {}
    for _, _, length, _, n in poly.edges():
        out[n] = out.get(n, 0) + length
    return out


def validate(result: LogFrontResult, dP: MarkedPolygon, dQ: MarkedPolygon,
             deg_p: int, deg_q: int) -> tuple:
    """Compare the computed Newton polygon with the predicted one.

    Returns ``(updated result, Diagnostics)``; R itself is never touched.
    """
    try:
        pred = predict_logfront(dP, dQ, deg_p, deg_q)
    except LatticeError as exc:
        diag = Diagnostics(False, None, deg_p, deg_q, None, None, (), str(exc))
        return replace(result, match=False), diag
    predicted = pred.marked.polygon
    pred_empty = len(predicted.vertices) == 1
    if result.empty or pred_empty:
        ok = result.empty and pred_empty
    else:
        ok = predicted == result.polygon_computed
    comp_l = _lengths_by_normal(result.polygon_computed)
    pred_l = _lengths_by_normal(None if pred_empty else predicted)
    deltas = tuple((n, comp_l.get(n, 0), pred_l.get(n, 0))
                   for n in sorted(set(comp_l) | set(pred_l))
                   if comp_l.get(n, 0) != pred_l.get(n, 0))
    diag = Diagnostics(ok, pred.marked, deg_p, deg_q, pred.boundary_derived,
                       pred.boundary_as_printed, deltas,
                       "" if ok else "computed Newton polygon differs from the prediction")
    return replace(result, polygon_predicted=None if pred_empty else predicted, match=ok), diag


def curve_data(curve: SparsePoly, profile: SingularityProfile = SMOOTH) -> tuple:
    """(marked Newton polygon, invariants) of a curve with its profile."""
    mp = edge_marking(curve)
    return mp, curve_invariants(mp, profile, allow_zero=True)


def compute(P: SparsePoly, Q: SparsePoly, profile_p: SingularityProfile = SMOOTH,
            profile_q: SingularityProfile = SMOOTH, **kwargs) -> tuple:
    """Pipeline followed by validation: ``(result, diagnostics)``."""
    res = logfront(P, Q, profile_p, profile_q, **kwargs)
    mp, ip = curve_data(P, profile_p)
    mq, iq = curve_data(Q, profile_q)
    return validate(res, mp, mq, ip.deg_gauss, iq.deg_gauss)


# --- consistency checks -------------------------------------------------------------

def order_independent(P: SparsePoly, Q: SparsePoly, profile_p: SingularityProfile = SMOOTH,
                      profile_q: SingularityProfile = SMOOTH, **kwargs) -> tuple:
    """(agree, R via w-first, R via z-first)."""
    r_w = logfront(P, Q, profile_p, profile_q, order="w", **kwargs).R
    r_z = logfront(P, Q, profile_p, profile_q, order="z", **kwargs).R
    return r_w == r_z, r_w, r_z


def invert_ab(R: SparsePoly) -> SparsePoly:
    """R(1/a, 1/b) times the smallest monomial making it a polynomial."""
    r = R.embed(("a", "b"))
    da, db = r.degree("a"), r.degree("b")
    return normalize(SparsePoly(("a", "b"), {(da - i, db - j): c for (i, j), c in r.terms.items()}))


def _is_sign_dilate(P: SparsePoly, Q: SparsePoly) -> bool:
    p, q = P.embed(("z", "w")), Q.embed(("z", "w"))
    if set(p.terms) != set(q.terms):
        return False
    for sz in (1, -1):
        for sw in (1, -1):
            ratios = {p.terms[e] * sz ** e[0] * sw ** e[1] / q.terms[e] for e in p.terms}
            if len(ratios) == 1:
                return True
    return False


def double_dual_check(P: SparsePoly, Q: SparsePoly, *,
                      degree_bound: Optional[int] = DEFAULT_DEGREE_BOUND) -> tuple:
    """Whether Q reappears in the second log-front stage, and how often.

    Computes S = P / Q, then the resultant R2 of P against S read as a curve
    in (z, w), and divides R2 by Q(a, b) as many times as possible.
    Returns ``(divides, multiplicity, S, T2)``.
    """
    _check_curve(P, "P")
    _check_curve(Q, "Q")
    if _is_sign_dilate(P, Q):
        raise PreconditionViolation("P is a dilate of Q: tangency is not isolated")
    S = logfront(P, Q, degree_bound=degree_bound)
    if S.empty:
        raise PreconditionViolation("empty log-front: nothing to dualize")
    s_zw = rename(S.R, {"a": "z", "b": "w"})
    order = "w" if s_zw.degree("w") >= 1 else "z"
    r1, _ = compute_R1(P, s_zw, order, degree_bound=degree_bound)
    t2 = compute_R2(r1, order, degree_bound=degree_bound)
    target = normalize(rename(Q, {"z": "a", "w": "b"}))
    k = 0
    rest = t2
    while not rest.is_constant():
        try:
            rest = rest / target
        except NotDivisibleError:
            break
        k += 1
    return k > 0, k, S.R, t2
