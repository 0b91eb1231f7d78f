"""Float evaluation of exact polynomials, vectorized over numpy arrays."""

from __future__ import annotations

import numpy as np

from ..exactalg import SparsePoly


class PolyEvaluator:
    """Callable ``f(**arrays)`` for a SparsePoly, plus the absolute-term scale."""

    def __init__(self, p: SparsePoly):
        self.vars = tuple(v for v in p.vars if p.degree(v) > 0)
        idx = [p.vars.index(v) for v in self.vars]
        self.exps = np.array([[e[i] for i in idx] for e in p.terms], dtype=int).reshape(len(p.terms), len(idx))
        self.coeffs = np.array([complex(c) for c in p.terms.values()])
        self.real = all(c.imag == 0 for c in self.coeffs)

    def _terms(self, values):
        shape = np.broadcast(*values).shape if values else ()
        out = []
        for k in range(len(self.coeffs)):
            t = np.full(shape, self.coeffs[k], dtype=complex)
            for x, e in zip(values, self.exps[k]):
                if e:
                    t = t * x ** int(e)
            out.append(t)
        return out

    def __call__(self, **values):
        vals = [np.asarray(values[v]) for v in self.vars]
        terms = self._terms(vals)
        total = sum(terms) if terms else np.zeros(np.broadcast(*vals).shape if vals else ())
        if self.real and all(np.isrealobj(v) for v in vals):
            return np.real(total)
        return total

    def scaled(self, **values):
        """(value, sum of |terms|)."""
        vals = [np.asarray(values[v]) for v in self.vars]
        terms = self._terms(vals)
        if not terms:
            z = np.zeros(np.broadcast(*vals).shape if vals else ())
            return z, z
        return sum(terms), sum(np.abs(t) for t in terms)


def coefficient_rows(p: SparsePoly, v: str) -> list:
    """Evaluators for the coefficients of v**k, k = 0..deg_v p."""
    from ..exactalg import coefficient_in
    return [PolyEvaluator(coefficient_in(p, v, k).trim()) for k in range(p.degree(v) + 1)]


def planar_function(p: SparsePoly, x: str, y: str, exponential: bool = False):
    """Real function f(X, Y) = p(x, y), or p(e^X, e^Y) when ``exponential``."""
    ev = PolyEvaluator(p)
    extra = set(ev.vars) - {x, y}
    if extra:
        raise ValueError(f"expression uses variables {sorted(extra)} besides {x}, {y}")

    def f(X, Y):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        if exponential:
            X, Y = np.exp(X), np.exp(Y)
        vals = {x: X, y: Y}
        out = ev(**{k: vals[k] for k in ev.vars})
        return np.broadcast_to(np.real(out), np.broadcast(X, Y).shape).astype(float)

    return f
