from __future__ import annotations

import json

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from logfront.invariants import (
    SMOOTH,
    BoundaryProfile,
    DegenerateCurve,
    InconsistentProfile,
    InvariantError,
    SingularityProfile,
    SingularPoint,
    classical_klein_check,
    cuspidal_nodal_numbers,
    curve_invariants,
    euler_characteristic,
    generic_degree_report,
    geometric_genus,
    inflection_count,
    klein_generic,
    klein_sum,
    log_gauss_degree,
    logfront_cuspidal,
    logfront_euler,
    logfront_gauss_degree,
    logfront_nodal,
    tangency_multiplicity,
)
from logfront.lattice import LatticePolygon, MarkedPolygon, polygon_metrics, predict_logfront
from logfront.pipeline import curve_data

from conftest import DATA, load

NODE = SingularPoint.node()
NODAL3 = SingularityProfile((NODE, NODE, NODE))


def tri(d):
    return LatticePolygon(((0, 0), (d, 0), (0, d)))


def smooth_data(d):
    mp = MarkedPolygon.transverse(tri(d))
    return mp, curve_invariants(mp)


def test_log_gauss_degree_examples():
    assert log_gauss_degree(0, 6) == 4
    assert log_gauss_degree(3, 12, NODAL3) == 10
    assert log_gauss_degree(0, 3) == 1
    with pytest.raises(DegenerateCurve):
        log_gauss_degree(0, 2)
    assert log_gauss_degree(0, 2, allow_zero=True) == 0


def test_genus_examples():
    assert geometric_genus(3) == 3
    assert geometric_genus(3, NODAL3) == 0
    assert geometric_genus(0) == 0
    assert euler_characteristic(3) == -4
    with pytest.raises(InconsistentProfile):
        geometric_genus(0, SingularityProfile((NODE,)))


def test_inflection_examples():
    assert inflection_count(1, 2) == 0
    assert inflection_count(4, 2) == 6
    assert inflection_count(10, 2) == 18


def test_cuspidal_nodal_examples():
    assert set(cuspidal_nodal_numbers(SMOOTH).values()) == {0}
    cusp = cuspidal_nodal_numbers(SingularityProfile((SingularPoint.cusp(),)))
    assert (cusp["c"], cusp["c_re"]) == (1, 1)
    solitary = cuspidal_nodal_numbers(SingularityProfile((SingularPoint.node(solitary=True),)))
    assert (solitary["b"], solitary["b_re_plus"]) == (1, 1)


def test_profile_validation():
    with pytest.raises(InconsistentProfile):
        SingularPoint(2, 2, 2)  # mu + beta - 1 odd
    with pytest.raises(InconsistentProfile):
        SingularPoint(1, 0, 2)  # m < beta
    with pytest.raises(InconsistentProfile):
        SingularPoint(2, 1, 2, real=False, conj_branch_pairs=1, local_nodal=1)


def test_profile_json_roundtrip():
    data = json.loads((DATA / "nodal_quartic.json").read_text())
    prof = SingularityProfile.from_json(data)
    assert SingularityProfile.from_json(prof.to_json()) == prof
    with pytest.raises(InconsistentProfile):
        SingularityProfile.from_json({"points": [{"m": 2}]})


def test_profile_boundary_must_match_polygon():
    mp = MarkedPolygon.transverse(tri(2))
    bad = SingularityProfile(boundary=BoundaryProfile.from_marked(MarkedPolygon.transverse(tri(1))))
    with pytest.raises(InconsistentProfile):
        curve_invariants(mp, bad)


def test_tangency_multiplicity_examples():
    assert tangency_multiplicity(1, 1, 1) == 0
    assert tangency_multiplicity(2, 1, 1) == 1
    assert tangency_multiplicity(3, 1, 1) == 2
    with pytest.raises(InvariantError):
        tangency_multiplicity(3, 2, 2)


def test_logfront_counts():
    assert logfront_gauss_degree(4, 4) == 16
    assert logfront_gauss_degree(1, 7) == 7
    assert logfront_gauss_degree(4, 10) == 40
    assert logfront_euler(4, 4, 2, 2) == (-16, -16)
    assert logfront_euler(4, 10, 2, 2) == (-52, -52)
    assert logfront_euler(4, 4, 2, 2, [(2, 2)])[1] == -15
    assert logfront_euler(4, 4, 2, 2, [(2, 3)])[1] == -16
    assert logfront_cuspidal(-16, 24, 2, 0, 6, 2, 0, 6) == 24
    assert logfront_cuspidal(2, 6, 2, 0, 3, 2, 0, 6) == 0
    assert logfront_cuspidal(-4, 36, 2, 0, 3, -4, 0, 12) == 24
    assert logfront_nodal(55, 3, 24) == 28
    assert logfront_nodal(0, 0, 0) == 0
    with pytest.raises(InvariantError):
        logfront_nodal(1, 3, 0)


def test_logfront_nodal_generic_conics():
    dP, dQ = smooth_data(2)[0], smooth_data(2)[0]
    poly = predict_logfront(dP, dQ, 4, 4).marked.polygon
    assert logfront_nodal(polygon_metrics(poly).interior, 9, 24) == 4


def test_generic_report():
    r = generic_degree_report(2, 2)
    assert (r.euler, r.genus, r.cusps, r.nodes) == (-16, 9, 24, 4)
    for d in range(2, 6):
        assert generic_degree_report(1, d).hexagon_sides[0] == d * (d - 1)
    deg = generic_degree_report(1, 1)
    assert deg.degenerate and deg.cusps is None and deg.raw["cusps"] == -3


@pytest.mark.parametrize("dp, dq", [(a, b) for a in (1, 2, 3) for b in (1, 2, 3) if (a, b) != (1, 1)])
def test_generic_adjunction_closure(dp, dq):
    (mp, ip), (mq, iq) = smooth_data(dp), smooth_data(dq)
    poly = predict_logfront(mp, mq, ip.deg_gauss, iq.deg_gauss).marked.polygon
    r = generic_degree_report(dp, dq)
    assert r.cusps + r.nodes + r.genus == polygon_metrics(poly).interior


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_dual_genus_equals_curve_genus(d):
    _, iq = smooth_data(d)
    chi, _ = logfront_euler(1, iq.deg_gauss, 2, iq.euler_char)
    assert (2 - chi) // 2 == iq.genus


# --- Klein-type counts ----------------------------------------------------------

def test_klein_frozen_data():
    mp, ip = curve_data(load("harnack_conic.poly"))
    prof = SingularityProfile.from_json(json.loads((DATA / "nodal_quartic.json").read_text()))
    mq, iq = curve_data(load("nodal_quartic.poly"), prof)
    assert (ip.deg_gauss, iq.deg_gauss, iq.genus) == (4, 10, 0)
    assert klein_sum(mp.polygon, mq.polygon, ip, iq) == 24


def test_klein_examples():
    (m2, i2), (m1, i1) = smooth_data(2), smooth_data(1)
    assert klein_sum(m2.polygon, m2.polygon, i2, i2) == 8
    assert klein_sum(m1.polygon, m2.polygon, i1, i2) == 0
    assert klein_generic(1, 4) == 8 == 0 + 8 == 2 * 4 + 0
    assert klein_generic(1, 2) == 0
    assert klein_generic(2, 2) == 8
    with pytest.raises(DegenerateCurve):
        klein_generic(1, 1)


@pytest.mark.parametrize("dp, dq", [(a, b) for a in (1, 2) for b in (2, 3, 4)])
def test_klein_sum_matches_generic(dp, dq):
    (mp, ip), (mq, iq) = smooth_data(dp), smooth_data(dq)
    assert klein_sum(mp.polygon, mq.polygon, ip, iq) == klein_generic(dp, dq)


def test_classical_klein():
    assert classical_klein_check(2, 2, 0, 0, 0, 0) == 0
    assert classical_klein_check(4, 12, 0, 0, 0, 8) == 0
    assert classical_klein_check(4, 12, 0, 0, 4, 0) == 0
    assert classical_klein_check(4, 12, 0, 0, 0, 0) != 0


# --- properties ---------------------------------------------------------------------

@st.composite
def singular_points(draw):
    m = draw(st.integers(2, 4))
    beta = draw(st.integers(1, m))
    mu = (m - 1) ** 2 + draw(st.integers(0, 3))
    if (mu + beta - 1) % 2:
        mu += 1
    real = draw(st.booleans())
    return SingularPoint(m, mu, beta, real)


@settings(max_examples=150)
@given(st.integers(2, 9), st.lists(singular_points(), max_size=4))
def test_cusp_count_consistency(d, pts):
    prof = SingularityProfile(tuple(pts))
    mp = MarkedPolygon.transverse(tri(d))
    interior = polygon_metrics(tri(d)).interior
    try:
        inv = curve_invariants(mp, prof)
    except (DegenerateCurve, InconsistentProfile):
        assume(False)
    lhs = sum(p.m - p.beta for p in pts)
    deg = 2 * interior + 3 * d - 2 - sum(p.mu + p.m - 1 for p in pts)
    chi = 2 - 2 * (interior - sum(p.mu + p.beta - 1 for p in pts) // 2)
    assert lhs == -deg - (chi - 3 * d) == inv.c
    assert inv.c == inv.c_re + inv.c_im
    assert inv.b == inv.b_re_plus + inv.b_re_minus + inv.b_im
