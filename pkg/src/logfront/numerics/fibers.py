"""Solutions of the tangency system at a given dilation (a, b)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..exactalg import SparsePoly, dilate, partial_derivative, resultant
from .config import DEFAULT, NumericsError, Tolerances
from .evaluate import PolyEvaluator, coefficient_rows
from .roots import univariate_roots

_TINY = 1e-12


@lru_cache(maxsize=64)
def _system(P: SparsePoly, Q: SparsePoly):
    pd = dilate(P)
    r1 = resultant(pd, Q, "w")
    return {
        "pd": PolyEvaluator(pd),
        "q": PolyEvaluator(Q),
        "r1_rows": coefficient_rows(r1, "z"),
        "q_rows": coefficient_rows(Q, "w"),
        "pd_z": PolyEvaluator(partial_derivative(pd, "z")),
        "pd_w": PolyEvaluator(partial_derivative(pd, "w")),
        "q_z": PolyEvaluator(partial_derivative(Q, "z")),
        "q_w": PolyEvaluator(partial_derivative(Q, "w")),
    }


def _call(ev: PolyEvaluator, **vals) -> complex:
    return complex(ev(**{k: vals[k] for k in ev.vars}))


def _scaled(ev: PolyEvaluator, **vals) -> float:
    v, s = ev.scaled(**{k: vals[k] for k in ev.vars})
    v, s = complex(v), float(s)
    return abs(v) / s if s else abs(v)


def fiber_solutions(P: SparsePoly, Q: SparsePoly, a: complex, b: complex,
                    tol: Tolerances = DEFAULT) -> list:
    """Torus solutions (z, w, multiplicity) of P(az, bw) = Q(z, w) = 0."""
    a, b = complex(a), complex(b)
    if abs(a) < _TINY or abs(b) < _TINY:
        raise NumericsError("dilation outside the torus (a or b is zero)")
    if Q.degree("w") < 1:
        raise NumericsError("Q must depend on w")
    sysm = _system(P, Q)
    coeffs = [_call(ev, a=a, b=b) for ev in sysm["r1_rows"]]
    if all(abs(c) == 0 for c in coeffs):
        raise NumericsError("degenerate specialization: eliminant vanishes identically")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    out = []
    for z, mult in univariate_roots(coeffs, tol):
        if abs(z) < _TINY:
            continue
        wc = [_call(ev, z=z) for ev in sysm["q_rows"]]
        while wc and wc[-1] == 0:
            wc.pop()
        if len(wc) < 2:
            continue
        best = None
        for w, _ in univariate_roots(wc, tol):
            if abs(w) < _TINY:
                continue
            res = max(_scaled(sysm["pd"], a=a, b=b, z=z, w=w), _scaled(sysm["q"], z=z, w=w))
            if best is None or res < best[0]:
                best = (res, w)
        if best is not None and best[0] < tol.fiber:
            out.append((z, best[1], mult))
    return out


def tangency_residual(P: SparsePoly, Q: SparsePoly, a: complex, b: complex,
                      tol: Tolerances = DEFAULT) -> float:
    """Smallest normalized Wronskian over the fiber; inf when the fiber is empty."""
    sysm = _system(P, Q)
    best = float("inf")
    for z, w, _ in fiber_solutions(P, Q, a, b, tol):
        pz = _call(sysm["pd_z"], a=a, b=b, z=z, w=w)
        pw = _call(sysm["pd_w"], a=a, b=b, z=z, w=w)
        qz = _call(sysm["q_z"], z=z, w=w)
        qw = _call(sysm["q_w"], z=z, w=w)
        wr = abs(pz * qw - pw * qz)
        scale = 1 + np.hypot(abs(pz), abs(pw)) * np.hypot(abs(qz), abs(qw))
        best = min(best, wr / scale)
    return best


@dataclass
class SampleReport:
    samples: int
    max_residual: float
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.failures else "fail"

    def to_json(self) -> dict:
        return {"samples": self.samples, "max_residual": self.max_residual,
                "failures": [{"a": a, "b": b, "residual": r} for a, b, r in self.failures],
                "verdict": self.verdict}
