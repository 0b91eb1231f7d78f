"""Exact certificates for the bundled example curves."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from logfront.exactalg import evaluate, partial_derivative as d, poly_gcd, poly_parse as P, resultant, \
    squarefree_full
from logfront.invariants import SingularityProfile
from logfront.lattice import newton_polygon, polygon_metrics
from logfront.pipeline import curve_data

from conftest import DATA, load


def singular_projection(q, var):
    """Square-free polynomial in the other variable vanishing at every affine singular point."""
    g = poly_gcd(resultant(q, d(q, "z"), var), resultant(q, d(q, "w"), var))
    if g.is_constant():
        return g
    out = P("1")
    for f, _ in squarefree_full(g)[1]:
        out = out * f
    return out


@pytest.mark.parametrize("name", ["two_ellipses.poly", "non_harnack.poly", "harnack_conic.poly",
                                  "conic_a.poly", "conic_b.poly"])
def test_smooth_examples(name):
    assert singular_projection(load(name), "w").is_constant()


def test_nodal_quartic_singular_points():
    q = load("nodal_quartic.poly")
    prof = json.loads((DATA / "nodal_quartic.json").read_text())
    pts = [tuple(Fraction(c) for c in p["coords"]) for p in prof["points"]]
    assert singular_projection(q, "w") == P("z^3 - 2*z^2 - z + 2")
    assert singular_projection(q, "z") == P("w^3 - 2*w^2 - w + 2")
    hess = [[d(d(q, u), v) for v in "zw"] for u in "zw"]
    for z, w in pts:
        at = {"z": z, "w": w}
        assert evaluate(q, at) == 0 and evaluate(d(q, "z"), at) == 0 and evaluate(d(q, "w"), at) == 0
        h = [[evaluate(e, at) for e in row] for row in hess]
        # negative Hessian determinant: two real transverse branches
        assert h[0][0] * h[1][1] - h[0][1] * h[1][0] < 0
    # three nodes on a smooth-polygon quartic leave genus 0
    mq, iq = curve_data(q, SingularityProfile.from_json(prof))
    assert polygon_metrics(newton_polygon(q)).interior == 3 and iq.genus == 0
