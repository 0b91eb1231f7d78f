from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logfront.exactalg import poly_parse as P
from logfront.lattice import mixed_volume, newton_polygon
from logfront.numerics import (
    NumericsError,
    SampleReport,
    aberth_batch,
    alga_sample,
    amoeba_area_estimate,
    amoeba_sample,
    cusp_detect,
    fiber_solutions,
    harnack_fiber_test,
    planar_function,
    tangency_residual,
    trace_real_locus,
    univariate_roots,
    verify_logfront,
)
from logfront.numerics.config import ordered_map, thread_count

from conftest import load
from fiber_oracle import fiber_count

LINE = P("z + w + 1")
HYP = P("z*w - 1")


# --- roots ---------------------------------------------------------------------

def test_roots_examples():
    r = sorted(univariate_roots([-1, 0, 1]), key=lambda t: t[0].real)
    assert [m for _, m in r] == [1, 1]
    assert abs(r[0][0] + 1) < 1e-12 and abs(r[1][0] - 1) < 1e-12
    (root, mult), = univariate_roots([0.25, 1, 1])
    assert mult == 2 and abs(root + 0.5) < 1e-10
    with pytest.raises(NumericsError):
        univariate_roots([3.0])


def test_roots_zero_root_and_residual():
    r = dict((round(x.real, 8), m) for x, m in univariate_roots([0, 0, -2, 1]))
    assert r == {0.0: 2, 2.0: 1}
    rng = np.random.default_rng(1)
    target = rng.normal(size=12) + 1j * rng.normal(size=12)
    coeffs = np.poly(target)[::-1]
    found = np.array([x for x, _ in univariate_roots(list(coeffs))])
    assert all(np.min(np.abs(found - t)) < 1e-8 for t in target)


def test_aberth_batch_rows():
    roots, ok = aberth_batch(np.array([[-1, 0, 1], [2, -3, 1]], dtype=complex))
    assert ok.all()
    assert np.allclose(np.sort_complex(roots[1]), [1, 2])


# --- fibers and tangency ------------------------------------------------------------

def test_fiber_double_point():
    sols = fiber_solutions(LINE, HYP, 1, 0.25)
    assert len(sols) == 1
    z, w, m = sols[0]
    assert m == 2 and abs(z + 0.5) < 1e-6 and abs(w + 2) < 1e-6


def test_fiber_two_simple_points():
    sols = fiber_solutions(LINE, HYP, 1, 1)
    assert len(sols) == 2 and all(m == 1 for *_, m in sols)


def test_fiber_outside_torus():
    with pytest.raises(NumericsError):
        fiber_solutions(LINE, HYP, 0, 1)


def test_tangency_residual_examples():
    assert tangency_residual(LINE, HYP, 1, 0.25) < 1e-6
    assert tangency_residual(LINE, HYP, 1, 1) > 1e-2
    assert tangency_residual(LINE, P("w - z^2"), 2, 1) < 1e-6


def test_sample_report_verdict():
    assert SampleReport(3, 0.0).verdict == "pass"
    assert SampleReport(3, 1.0, [(1.0, 1.0, 1.0)]).verdict == "fail"


@settings(max_examples=100)
@given(st.floats(0.3, 3.0), st.floats(0.0, 2 * math.pi), st.floats(0.3, 3.0), st.floats(0.0, 2 * math.pi),
       st.sampled_from(["hyperbola", "conics"]))
def test_fiber_count_is_mixed_volume(ra, ta, rb, tb, case):
    a, b = ra * np.exp(1j * ta), rb * np.exp(1j * tb)
    p, q = (LINE, HYP) if case == "hyperbola" else (load("conic_a.poly"), load("conic_b.poly"))
    sols = fiber_solutions(p, q, a, b)
    assert sum(m for *_, m in sols) == mixed_volume(newton_polygon(p), newton_polygon(q))


# --- tracing --------------------------------------------------------------------------

def test_trace_frozen_line():
    f = planar_function(P("4*a*b - 1"), "a", "b", exponential=True)
    tr = trace_real_locus(f, (-3, 1, -3, 1), 256)
    pts = tr.points()
    assert len(pts) > 100
    assert np.max(np.abs(pts.sum(axis=1) + math.log(4))) < 1e-3
    assert tr.all_residuals().max() < 1e-9


def test_trace_circle_and_empty():
    circle = trace_real_locus(lambda x, y: x ** 2 + y ** 2 - 1, (-2, 2, -2, 2), 512)
    assert abs(circle.length() - 2 * math.pi) < 0.01 * 2 * math.pi
    assert cusp_detect(circle) == []
    empty = trace_real_locus(lambda x, y: x ** 2 + y ** 2 + 1, (-2, 2, -2, 2), 64)
    assert empty.polylines == [] and len(empty.points()) == 0


def test_trace_rejects_bad_input():
    with pytest.raises(NumericsError):
        trace_real_locus(lambda x, y: x, (1, 0, 0, 1), 64)
    with pytest.raises(NumericsError):
        trace_real_locus(lambda x, y: x, (0, 1, 0, 1), 4)


def test_astroid_has_four_cusps():
    f = lambda x, y: (x ** 2 + y ** 2 - 1) ** 3 + 27 * x ** 2 * y ** 2
    cusps = cusp_detect(trace_real_locus(f, (-1.5, 1.5, -1.5, 1.5), 512))
    assert len(cusps) == 4
    tips = sorted((round(c.x), round(c.y)) for c in cusps)
    assert tips == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_nodal_cubic_crossing_is_not_a_cusp():
    f = lambda x, y: y ** 2 - x ** 2 * (x + 1)
    assert cusp_detect(trace_real_locus(f, (-2, 2, -2, 2), 256)) == []


# --- amoebas ------------------------------------------------------------------------

def test_line_amoeba_triangle_inequality():
    rng = np.random.default_rng(0)
    xs = rng.uniform(-3, 3, 10)
    pts = amoeba_sample(LINE, xs, rng.uniform(0, 2 * math.pi, 10))
    assert len(pts) == 100
    m = np.exp(pts)
    a, b = m[:, 0], m[:, 1]
    tol = 1e-9 * (1 + a + b)
    assert np.all(a <= b + 1 + tol) and np.all(b <= a + 1 + tol) and np.all(1 <= a + b + tol)
    # real z (theta = 0 or pi) lies on the amoeba boundary: equality
    edge = np.exp(amoeba_sample(LINE, xs, [0.0, math.pi]))
    gap = np.minimum.reduce([np.abs(edge[:, 1] - edge[:, 0] - 1), np.abs(edge[:, 0] - edge[:, 1] - 1),
                             np.abs(edge[:, 0] + edge[:, 1] - 1)])
    assert gap.max() < 1e-9


def test_binomial_amoebas():
    xs = np.linspace(-2, 2, 9)
    d = amoeba_sample(P("w - z"), xs, np.linspace(0, 6, 7))
    assert np.allclose(d[:, 0], d[:, 1])
    a = amoeba_sample(HYP, xs, np.linspace(0, 6, 7))
    assert np.allclose(a[:, 0], -a[:, 1])


def test_alga_quotient_and_residuals():
    pts, res = alga_sample(LINE, [0.0, 0.5], np.linspace(0, 6, 50), residuals=True)
    assert pts.min() >= 0 and pts.max() < math.pi
    assert res.max() < 1e-12


def test_harnack_fiber_counts():
    assert harnack_fiber_test(LINE, grid=15).max_count == 2
    assert harnack_fiber_test(load("harnack_conic.poly"), grid=15).verdict == "pass"
    rep = harnack_fiber_test(load("non_harnack.poly"), grid=15)
    assert rep.max_count == 4 and rep.verdict == "fail"


@pytest.mark.parametrize("name, expected", [("line.poly", 2), ("harnack_conic.poly", 2), ("non_harnack.poly", 4)])
def test_fiber_oracle_agrees_with_tracking(name, expected):
    p = load(name)
    grid = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4)]
    counts = {(u, v): fiber_count(p, u, v) for u in grid for v in grid}
    assert max(counts.values()) == expected
    u, v = max(counts, key=counts.get)
    rep = harnack_fiber_test(p, window=(math.log(u) / 2 - 0.01, math.log(u) / 2 + 0.01,
                                        math.log(v) / 2 - 0.01, math.log(v) / 2 + 0.01), grid=3)
    assert rep.max_count == expected


def test_area_estimate_small():
    rep = amoeba_area_estimate(LINE, n=40_000, columns=200)
    assert abs(rep.ratio - 1) < 0.15
    with pytest.raises(NumericsError):
        amoeba_area_estimate(LINE, n=100)


def test_area_estimate_is_seeded():
    a = amoeba_area_estimate(LINE, n=20_000, columns=100, seed=3)
    b = amoeba_area_estimate(LINE, n=20_000, columns=100, seed=3)
    assert a.area == b.area


def test_verify_hyperbola():
    rep = verify_logfront(LINE, HYP, P("4*a*b - 1"))
    assert rep["verdict"] == "pass"
    bad = verify_logfront(LINE, HYP, P("a*b - 1"))
    assert bad["verdict"] == "fail"


def test_thread_setting(monkeypatch):
    monkeypatch.setenv("LOGFRONT_THREADS", "3")
    assert thread_count() == 3
    assert ordered_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
    monkeypatch.setenv("LOGFRONT_THREADS", "nonsense")
    assert thread_count() == 1
