"""Hypothesis strategies for small integer polynomials."""

from __future__ import annotations

from hypothesis import strategies as st

from logfront.exactalg import SparsePoly

coeff = st.integers(-9, 9)


@st.composite
def polys(draw, vars=("z", "w"), max_deg=3, max_terms=5, nonzero=True):
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in vars)
        terms[e] = draw(coeff)
    p = SparsePoly(tuple(vars), {e: c for e, c in terms.items() if c})
    if nonzero and p.is_zero():
        p = SparsePoly(tuple(vars), {tuple(0 for _ in vars): 1})
    return p


@st.composite
def univariate(draw, var="t", max_deg=5):
    cs = draw(st.lists(coeff, min_size=2, max_size=max_deg + 1))
    if cs[-1] == 0:
        cs[-1] = 1
    return SparsePoly((var,), {(k,): c for k, c in enumerate(cs) if c})
