"""Fiber counts of the amoeba map by exact elimination, independent of root tracking.

For real P and a point of the fiber over (x, y) with u = e^{2x}, v = e^{2y},
conj(z) = u / z and conj(w) = v / w, so the fiber consists of common zeros of
P(z, w) and z^dz w^dw P(u / z, v / w) lying on |z|^2 = u, |w|^2 = v.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from logfront.exactalg import SparsePoly, resultant
from logfront.exactalg.poly import coefficient_in


def reflected(p: SparsePoly, u: Fraction, v: Fraction) -> SparsePoly:
    pe = p.embed(("z", "w"))
    dz, dw = pe.degree("z"), pe.degree("w")
    return SparsePoly(("z", "w"), {(dz - i, dw - j): c * Fraction(u) ** i * Fraction(v) ** j
                                   for (i, j), c in pe.terms.items()})


def _eval_z(p: SparsePoly, z: complex) -> complex:
    return complex(sum(float(c) * z ** e[0] for e, c in p.embed(("z",)).terms.items()))


def fiber_count(p: SparsePoly, u: Fraction, v: Fraction, tol: float = 1e-6) -> int:
    r = resultant(p, reflected(p, u, v), "w").embed(("z",))
    deg = r.degree("z")
    zs = np.roots([float(r.terms.get((k,), 0)) for k in range(deg, -1, -1)])
    distinct: list = []
    for z in zs:
        if abs(abs(z) ** 2 - u) <= tol * max(1.0, float(u)) and all(abs(z - y) > 1e-6 for y in distinct):
            distinct.append(z)
    n = 0
    for z in distinct:
        wc = [_eval_z(coefficient_in(p, "w", k), z) for k in range(p.degree("w"), -1, -1)]
        n += sum(1 for w in np.roots(wc) if abs(abs(w) ** 2 - v) <= tol * max(1.0, float(v)))
    return n
