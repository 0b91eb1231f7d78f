"""Resultants, gcds, square-free decomposition and Sturm counts over Q."""

from __future__ import annotations

from fractions import Fraction

from . import _kernel as K
from .poly import (
    PolynomialError,
    SparsePoly,
    _from_int,
    _sort_vars,
    _to_int,
    grlex_key,
    partial_derivative,
)

METHODS = ("subresultant", "bareiss")


class ResultantError(PolynomialError):
    code = "exactalg.resultant"


def _layout_for(*polys, extra=()):
    names = set(extra)
    for p in polys:
        names.update(p.vars)
    return _sort_vars(names)


def resultant(p: SparsePoly, q: SparsePoly, v: str, method: str = "subresultant") -> SparsePoly:
    """Resultant of ``p`` and ``q`` with respect to ``v``.

    Both methods are fraction-free over Z after clearing denominators and
    give identical results (Sylvester sign convention).
    """
    if method not in METHODS:
        raise ValueError(f"unknown resultant method {method!r}")
    dp, dq = p.degree(v), q.degree(v)
    if dp < 1 and dq < 1:
        if p.is_zero() or q.is_zero():
            return SparsePoly.constant(0)
        raise ResultantError(f"both polynomials are constant in {v}")
    vars, (ip, iq), (den_p, den_q) = _to_int((p, q), _layout_for(p, q, extra=(v,)))
    lay = K.Layout(len(vars))
    i = vars.index(v)
    A = K.to_univariate(ip, i, lay)
    B = K.to_univariate(iq, i, lay)
    if method == "subresultant":
        r = K.resultant_subresultant(A, B, lay)
    else:
        r = K.resultant_bareiss(A, B, lay)
    factor = Fraction(1, den_p ** max(dq, 0) * den_q ** max(dp, 0))
    return _from_int(vars, r, lay, factor).trim()


def wronskian(pd: SparsePoly, q: SparsePoly) -> SparsePoly:
    """d/dz(pd) * d/dw(q) - d/dw(pd) * d/dz(q)."""
    return (partial_derivative(pd, "z") * partial_derivative(q, "w")
            - partial_derivative(pd, "w") * partial_derivative(q, "z"))


# --- normalization --------------------------------------------------------

def normalize(p: SparsePoly) -> SparsePoly:
    """Primitive integer multiple with positive grlex-leading coefficient."""
    if p.is_zero():
        return p
    vars, (ip,), _ = _to_int((p,))
    lay = K.Layout(len(vars))
    c = K.content_int(ip)
    lead = max(p.terms, key=lambda e: grlex_key(e, p.vars))
    if p.terms[lead] < 0:
        c = -c
    return _from_int(vars, ip, lay, Fraction(1, c)).trim()


def content(p: SparsePoly, v: str) -> SparsePoly:
    """Content of p as a polynomial in v, normalized (positive, primitive)."""
    if p.is_zero():
        return p
    vars, (ip,), _ = _to_int((p,), _layout_for(p, extra=(v,)))
    lay = K.Layout(len(vars))
    c = K.content(ip, vars.index(v), lay)
    return normalize(_from_int(vars, c, lay))


def poly_gcd(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Normalized gcd over Q; gcd(0, q) is normalized q, gcd(0, 0) = 0."""
    if p.is_zero() and q.is_zero():
        return p
    vars, (ip, iq), _ = _to_int((p, q))
    lay = K.Layout(len(vars))
    return normalize(_from_int(vars, K.gcd(ip, iq, lay), lay))


# --- square-free decomposition -----------------------------------------------

def squarefree_decomposition(p: SparsePoly, v: str) -> list:
    """Yun decomposition with respect to ``v``.

    Returns ``[(factor, multiplicity), ...]`` with strictly increasing
    multiplicities; each factor is normalized, square-free in ``v``, and the
    factors are pairwise coprime.  The remaining content (a polynomial free
    of ``v`` times a rational) is ``p / prod(f**k)``.
    """
    if p.is_zero():
        raise PolynomialError("square-free decomposition of zero")
    if p.degree(v) < 1:
        return []
    vars, (ip,), _ = _to_int((p,), _layout_for(p, extra=(v,)))
    lay = K.Layout(len(vars))
    i = vars.index(v)
    f = K.primitive_part(ip, i, lay)
    out = []
    for g, k in _yun(f, i, lay):
        out.append((normalize(_from_int(vars, g, lay)), k))
    return out


def _yun(f: dict, i: int, lay: K.Layout):
    df = K.derivative(f, i, lay)
    a = K.gcd(f, df, lay)
    b = K.divexact(f, a, lay)
    c = K.divexact(df, a, lay)
    d = K.sub(c, K.derivative(b, i, lay))
    k = 1
    while K.degree_in(b, i, lay) > 0:
        a = K.gcd(b, d, lay)
        b = K.divexact(b, a, lay)
        if K.degree_in(a, i, lay) > 0:
            yield a, k
        if K.degree_in(b, i, lay) <= 0:
            break
        c = K.divexact(d, a, lay)
        d = K.sub(c, K.derivative(b, i, lay))
        k += 1


def squarefree_full(p: SparsePoly) -> tuple:
    """Square-free decomposition in every variable.

    Returns ``(unit, factors)`` where ``unit`` is a rational and ``factors``
    lists ``(factor, multiplicity)`` with normalized, square-free, pairwise
    coprime, nonconstant factors.  Multiplicities may repeat when factors
    come from different variables' contents; they are merged by product.
    """
    if p.is_zero():
        raise PolynomialError("square-free decomposition of zero")
    acc: dict = {}
    rest = p
    for v in p.used_vars():
        if rest.degree(v) < 1:
            continue
        parts = squarefree_decomposition(rest, v)
        for f, k in parts:
            acc[k] = acc[k] * f if k in acc else f
            rest = rest / (f ** k)
    if not rest.is_constant():  # pragma: no cover - every variable was consumed
        raise PolynomialError("square-free decomposition left a nonconstant content")
    unit = next(iter(rest.terms.values()), Fraction(0))
    return unit, [(normalize(acc[k]), k) for k in sorted(acc)]


# --- Sturm sequences --------------------------------------------------------------

def _univariate_coeffs(p: SparsePoly) -> tuple:
    used = p.used_vars()
    if len(used) > 1:
        raise PolynomialError("Sturm sequence needs a univariate polynomial")
    if not used:
        return None, [next(iter(p.terms.values()), Fraction(0))]
    v = used[0]
    deg = p.degree(v)
    i = p.vars.index(v)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[i]] = c
    return v, coeffs


def _urem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        off = len(a) - len(b)
        for j, c in enumerate(b):
            a[j + off] -= f * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def sturm_sequence(p: SparsePoly) -> list:
    _, c = _univariate_coeffs(p)
    while c and c[-1] == 0:
        c.pop()
    if not c:
        raise PolynomialError("Sturm sequence of zero")
    seq = [c]
    if len(c) == 1:
        return seq
    seq.append([k * x for k, x in enumerate(c)][1:])
    while len(seq[-1]) > 1:
        r = _urem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-x for x in r])
    return seq


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_real_roots(p: SparsePoly) -> int:
    """Number of distinct real roots of a nonzero univariate polynomial."""
    seq = sturm_sequence(p)
    at_pos = [1 if s[-1] > 0 else -1 for s in seq]
    at_neg = [(1 if s[-1] > 0 else -1) * (-1 if (len(s) - 1) % 2 else 1) for s in seq]
    return _variations(at_neg) - _variations(at_pos)
