from __future__ import annotations

from fractions import Fraction

import pytest

from logfront.exactalg import SparsePoly, format_poly, normalize, poly_parse as P
from logfront.invariants import SingularityProfile, SingularPoint, curve_invariants
from logfront.lattice import MarkedPolygon, polygon_metrics
from logfront.pipeline import (
    DegreeBoundExceeded,
    PipelineError,
    PreconditionViolation,
    compute,
    compute_R1,
    curve_data,
    double_dual_check,
    invert_ab,
    logfront,
    order_independent,
    validate,
)

from conftest import load

LINE = P("z + w + 1")


def test_R1_of_hyperbola():
    r1, _ = compute_R1(LINE, P("z*w - 1"))
    # P(az, bw) with w = 1/z, cleared: a z^2 + z + b
    assert r1 == P("a*z^2 + z + b")


def test_R1_requires_w():
    with pytest.raises(PipelineError):
        compute_R1(LINE, P("z - 2"), order="w")


@pytest.mark.parametrize("q, r", [("z*w - 1", "4*a*b - 1"), ("w - z^2", "a^2 - 4*b")])
def test_dual_examples(q, r):
    res, diag = compute(LINE, P(q))
    assert res.R == P(r)
    assert res.match and diag.match


def _dual_conic_oracle(q: SparsePoly) -> SparsePoly:
    """Classical dual conic: (a, b, 1) adj(M) (a, b, 1)^T for the symmetric matrix M of q."""
    c = lambda i, j: Fraction(q.embed(("z", "w")).terms.get((i, j), 0))
    M = [[c(2, 0), c(1, 1) / 2, c(1, 0) / 2],
         [c(1, 1) / 2, c(0, 2), c(0, 1) / 2],
         [c(1, 0) / 2, c(0, 1) / 2, c(0, 0)]]

    def cof(i, j):
        r = [k for k in range(3) if k != i]
        s = [k for k in range(3) if k != j]
        return (-1) ** (i + j) * (M[r[0]][s[0]] * M[r[1]][s[1]] - M[r[0]][s[1]] * M[r[1]][s[0]])

    x = [P("a"), P("b"), P("1")]
    out = P("0")
    for i in range(3):
        for j in range(3):
            out = out + x[i] * x[j] * cof(j, i)
    return normalize(out)


@pytest.mark.parametrize("q", ["2*z^2 + 3*z*w - w^2 - 5*z + 3/2*w - 6",
                               "3*z^2 - 2*z*w + 5/2*w^2 + 7*z - 4*w + 2", "z^2 + w^2 - 4"])
def test_line_vs_conic_matches_adjugate(q):
    res, _ = compute(LINE, P(q))
    assert res.R == _dual_conic_oracle(P(q))
    assert res.match


def test_line_vs_conic_frozen():
    res, _ = compute(LINE, load("conic_a.poly"))
    assert res.R == P("25*b^2 + 40*a*b - 4*a^2 - 20*b + 54*a - 26")


def test_generic_conics_hexagon():
    res, diag = compute(load("conic_a.poly"), load("conic_b.poly"))
    assert res.match
    assert [e[2] for e in res.polygon_computed.edges()] == [4] * 6
    assert diag.boundary_derived == 24 and diag.boundary_as_printed == 36


def test_order_independence():
    ok, rw, rz = order_independent(load("conic_a.poly"), load("conic_b.poly"))
    assert ok and rw == rz


@pytest.mark.parametrize("q", ["z*w - 1", "w - z^2"])
def test_symmetry(q):
    forward = logfront(LINE, P(q)).R
    backward = logfront(P(q), LINE).R
    assert backward == invert_ab(forward)


def test_removals_are_recorded():
    res = logfront(LINE, P("z*w - 1"))
    reasons = {r.reason for r in res.removed}
    assert reasons <= {"multiplicity>1", "leading-coefficient", "monomial", "dilate-of-P", "dilate-of-Q"}
    assert res.to_json()["R_text"] == "4*a*b - 1"


def test_boundary_tangent_curve_shrinks_polygon():
    # the edge polynomial (z + w)^2 is a square: P is tangent to a boundary divisor
    tangent = P("(z+w)^2 + z + 2*w + 3")
    conic = load("conic_b.poly")
    res, _ = compute(tangent, conic)
    assert res.match
    generic_p = MarkedPolygon.transverse(curve_data(tangent)[0].polygon)
    mq, iq = curve_data(conic)
    res2, diag = validate(res, generic_p, mq, curve_invariants(generic_p).deg_gauss, iq.deg_gauss)
    assert not res2.match and diag.edge_deltas
    # the computed polygon sits inside the generic one (both canonically translated)
    big = diag.predicted.polygon
    assert all(big.contains(v) for v in res.polygon_computed.vertices)
    assert polygon_metrics(big).area2 > polygon_metrics(res.polygon_computed).area2


def test_nodal_profile_enters_prediction():
    cubic = P("w^3 + 1/2*z*w^2 + z^3 - 9/2*w^2 - z*w - 2*z^2 + 6*w + 3/2*z - 5/2")
    node = SingularityProfile((SingularPoint.node(coords=(Fraction(1), Fraction(1))),))
    res, _ = compute(LINE, cubic, profile_q=node)
    assert res.match and res.R.degree() == 4
    assert P("a + b + 1") in {r.factor for r in res.removed}
    assert not compute(LINE, cubic)[0].match


def test_empty_logfront_of_two_lines():
    res, diag = compute(LINE, P("z + 2*w + 3"))
    assert res.empty and res.match


def test_degree_bound():
    with pytest.raises(DegreeBoundExceeded):
        logfront(load("conic_a.poly"), load("conic_b.poly"), degree_bound=4)


@pytest.mark.parametrize("q", ["2*z^2 + 3*z*w - w^2 - 5*z + 3/2*w - 6", "z*w - 1", "z^2 + w^2 - 4"])
def test_double_dual(q):
    divides, k, S, _ = double_dual_check(LINE, P(q))
    assert divides and k == 1


def test_double_dual_of_hyperbola_is_hyperbola():
    _, _, S, _ = double_dual_check(LINE, P("z*w - 1"))
    assert format_poly(S) == "4*a*b - 1"
    # dual of S (read in z, w) is Q again, now in a, b
    assert logfront(LINE, P("4*z*w - 1")).R == P("a*b - 1")


def test_double_dual_rejects_dilates():
    with pytest.raises(PreconditionViolation):
        double_dual_check(LINE, LINE)
    with pytest.raises(PreconditionViolation):
        double_dual_check(P("z*w - 1"), P("-z*w - 1"))


@pytest.mark.slow
def test_frozen_data_full_elimination():
    import json

    from conftest import DATA

    prof = SingularityProfile.from_json(json.loads((DATA / "nodal_quartic.json").read_text()))
    res, diag = compute(load("harnack_conic.poly"), load("nodal_quartic.poly"), profile_q=prof,
                        degree_bound=400)
    assert res.match
    assert res.R.degree() == 28
    assert sorted(e[2] for e in res.polygon_computed.edges()) == [8] * 3 + [12] * 3


def test_parallel_binomial_has_no_polygon():
    # the dilated line always meets the diagonal transversally
    res, diag = compute(LINE, P("w - z"))
    assert res.empty and not diag.match
    assert "boundary tangencies" in diag.message
