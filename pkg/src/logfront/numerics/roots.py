"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration)."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT, NumericsError, Tolerances

_EPS = np.finfo(float).eps


def _horner(c: np.ndarray, z: np.ndarray) -> tuple:
    """p(z) and p'(z) for ascending coefficient rows ``c`` (N, d+1) at z (N, m)."""
    d = c.shape[1] - 1
    p = np.repeat(c[:, d:d + 1], z.shape[1], axis=1).astype(complex)
    dp = np.zeros_like(p)
    for k in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k:k + 1]
    return p, dp


def _initial(c: np.ndarray) -> np.ndarray:
    n, d1 = c.shape
    d = d1 - 1
    mags = np.abs(c[:, :d] / c[:, d:d + 1])
    k = d - np.arange(d)
    with np.errstate(divide="ignore"):
        radius = 2.0 * np.max(np.where(mags > 0, mags ** (1.0 / k), 0.0), axis=1)
    radius = np.where(radius > 0, radius, 1.0)
    angles = 2 * np.pi * np.arange(d) / d + 0.4
    return radius[:, None] * np.exp(1j * angles)[None, :] * (1 + 0.01 * np.arange(d) / d)


def aberth_batch(coeffs, tol: Tolerances = DEFAULT) -> tuple:
    """Roots of each row of ``coeffs`` (ascending, leading entry nonzero).

    Returns ``(roots (N, d), converged (N,) bool)``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim == 1:
        c = c[None, :]
    d = c.shape[1] - 1
    if d < 1:
        raise NumericsError("degree-0 polynomial has no roots")
    if d == 1:
        return (-c[:, :1] / c[:, 1:2]), np.ones(len(c), bool)
    c = c / c[:, d:d + 1]
    z = _initial(c)
    done = np.zeros(z.shape, bool)
    eye = np.eye(d, dtype=bool)[None]
    for _ in range(tol.max_iterations):
        p, dp = _horner(c, z)
        diff = z[:, :, None] - z[:, None, :]
        diff = np.where(eye, 1.0, diff)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(eye, 0.0, 1.0 / diff).sum(axis=2)
            ratio = p / dp
            w = ratio / (1 - ratio * s)
        w = np.where(p == 0, 0.0, w)
        bad = ~np.isfinite(w)
        if bad.any():
            w = np.where(bad, 1e-3 * (1 + np.abs(z)) * np.exp(1j * 1.7), w)
        w = np.where(done, 0.0, w)
        z = z - w
        done = done | (np.abs(w) <= 4 * _EPS * np.maximum(np.abs(z), 1e-300))
        if done.all():
            break
    return z, done.all(axis=1)


def cluster(roots, radius: float) -> list:
    """Merge roots closer than ``radius`` (single linkage); [(mean, count)]."""
    roots = list(roots)
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    return sorted(out, key=lambda r: (round(r[0].real, 12), round(r[0].imag, 12)))


def poly_scaled_value(coeffs, x: complex) -> float:
    """|p(x)| divided by the sum of the absolute values of the terms."""
    val, scale = 0j, 0.0
    for k, ck in enumerate(coeffs):
        t = ck * x ** k
        val += t
        scale += abs(t)
    return abs(val) / scale if scale else 0.0


def _derivative(c: list, m: int) -> list:
    for _ in range(m):
        c = [k * x for k, x in enumerate(c)][1:]
    return c


def _polish(c: list, r: complex, m: int, radius: float) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    f = _derivative(c, m - 1)
    df = _derivative(f, 1)
    if not df:
        return r
    x = r
    for _ in range(8):
        fx = sum(a * x ** k for k, a in enumerate(f))
        dfx = sum(a * x ** k for k, a in enumerate(df))
        if dfx == 0:
            break
        step = fx / dfx
        x = x - step
        if abs(step) <= 4 * _EPS * abs(x):
            break
    return x if abs(x - r) < radius else r


def univariate_roots(coeffs, tol: Tolerances = DEFAULT) -> list:
    """Roots of sum(coeffs[k] * x**k) as ``[(root, multiplicity), ...]``.

    Roots closer than ``tol.cluster`` are merged with summed multiplicity.
    """
    c = [complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        raise NumericsError("polynomial of degree < 1 has no roots")
    zeros = 0
    while c[zeros] == 0:
        zeros += 1
    c = c[zeros:]
    found = []
    if len(c) > 1:
        z, ok = aberth_batch(np.array([c]), tol)
        found = list(z[0])
        if not ok[0]:
            clusters = cluster(found, tol.cluster)
            if any(poly_scaled_value(c, r) > tol.root_residual for r, _ in clusters):
                raise NumericsError("root iteration did not converge", partial=clusters)
    out = [(_polish(c, r, m, tol.cluster), m) for r, m in cluster(found, tol.cluster)]
    for r, _ in out:
        if poly_scaled_value(c, r) > tol.root_residual:
            raise NumericsError(f"root residual too large at {r}", partial=out)
    if zeros:
        out = sorted(out + [(0j, zeros)], key=lambda r: (round(r[0].real, 12), round(r[0].imag, 12)))
    return out
