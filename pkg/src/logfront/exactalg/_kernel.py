"""Integer polynomial kernels on packed exponent keys.

A polynomial over Z in ``n`` variables is a dict mapping a packed exponent
key to a nonzero int.  Each exponent occupies a 16-bit field; the first
variable sits in the most significant field so integer order on keys is
lexicographic order on exponent tuples.  The top bit of every field is a
guard bit kept clear, which makes monomial divisibility a single
subtraction.
"""

from __future__ import annotations

from math import gcd as igcd

FIELD = 16
MASK = (1 << (FIELD - 1)) - 1
MAX_EXP = MASK


class NotDivisible(ArithmeticError):
    """Raised by :func:`divexact` when the divisor does not divide."""


class Layout:
    """Packing layout for a fixed number of variables."""

    __slots__ = ("n", "shifts", "guard")

    def __init__(self, n: int):
        self.n = n
        self.shifts = tuple(FIELD * (n - 1 - i) for i in range(n))
        self.guard = sum(1 << (s + FIELD - 1) for s in self.shifts)

    def pack(self, exps) -> int:
        key = 0
        for e, s in zip(exps, self.shifts):
            if e < 0 or e > MAX_EXP:
                raise OverflowError(f"exponent {e} outside packed range")
            key |= e << s
        return key

    def unpack(self, key: int) -> tuple:
        return tuple((key >> s) & MASK for s in self.shifts)

    def exp(self, key: int, i: int) -> int:
        return (key >> self.shifts[i]) & MASK

    def divides(self, d: int, m: int):
        """Return ``m - d`` as a key if monomial ``d`` divides ``m``, else None."""
        diff = (m | self.guard) - d
        if diff & self.guard != self.guard:
            return None
        return diff ^ self.guard


# --- ring arithmetic ------------------------------------------------------

def add(p: dict, q: dict) -> dict:
    if len(p) < len(q):
        p, q = q, p
    r = dict(p)
    for k, c in q.items():
        v = r.get(k, 0) + c
        if v:
            r[k] = v
        else:
            r.pop(k, None)
    return r


def sub(p: dict, q: dict) -> dict:
    r = dict(p)
    for k, c in q.items():
        v = r.get(k, 0) - c
        if v:
            r[k] = v
        else:
            r.pop(k, None)
    return r


def neg(p: dict) -> dict:
    return {k: -c for k, c in p.items()}


def scale(p: dict, c: int) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in p.items()}


def shift(p: dict, key: int) -> dict:
    return {k + key: c for k, c in p.items()}


def mul(p: dict, q: dict) -> dict:
    if not p or not q:
        return {}
    if len(p) < len(q):
        p, q = q, p
    if len(q) == 1:
        (kq, cq), = q.items()
        return {k + kq: c * cq for k, c in p.items()}
    r: dict = {}
    get = r.get
    for kq, cq in q.items():
        for kp, cp in p.items():
            k = kp + kq
            r[k] = get(k, 0) + cp * cq
    return {k: c for k, c in r.items() if c}


def power(p: dict, e: int) -> dict:
    result = {0: 1}
    base = p
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def divexact(p: dict, d: dict, layout: Layout) -> dict:
    """Exact quotient ``p / d`` in Z[x]; raises NotDivisible otherwise."""
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if not p:
        return {}
    if len(d) == 1:
        (kd, cd), = d.items()
        q = {}
        for k, c in p.items():
            t = layout.divides(kd, k)
            if t is None or c % cd:
                raise NotDivisible
            q[t] = c // cd
        return q
    ld = max(d)
    lc = d[ld]
    rest = [(k - ld, c) for k, c in d.items() if k != ld]
    r = dict(p)
    q = {}
    # keys of r are consumed in decreasing order; new keys are always smaller
    # than the current leading key, so a sorted worklist stays valid
    while r:
        m = max(r)
        c = r.pop(m)
        t = layout.divides(ld, m)
        if t is None or c % lc:
            raise NotDivisible
        qc = c // lc
        q[t] = qc
        for off, dc in rest:
            k = t + ld + off
            v = r.get(k, 0) - qc * dc
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return q


def content_int(p: dict) -> int:
    g = 0
    for c in p.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def is_const(p: dict) -> bool:
    return not p or (len(p) == 1 and 0 in p)


def const(c: int) -> dict:
    return {0: c} if c else {}


def degree_in(p: dict, i: int, layout: Layout) -> int:
    if not p:
        return -1
    s = layout.shifts[i]
    return max((k >> s) & MASK for k in p)


def derivative(p: dict, i: int, layout: Layout) -> dict:
    s = layout.shifts[i]
    unit = 1 << s
    r = {}
    for k, c in p.items():
        e = (k >> s) & MASK
        if e:
            r[k - unit] = c * e
    return r


# --- univariate views -----------------------------------------------------

def to_univariate(p: dict, i: int, layout: Layout) -> list:
    """Coefficient list (index = degree in variable i) of sub-dicts."""
    s = layout.shifts[i]
    field = MASK << s
    coeffs: list = []
    for k, c in p.items():
        e = (k >> s) & MASK
        while len(coeffs) <= e:
            coeffs.append({})
        coeffs[e][k & ~field] = c
    return coeffs


def from_univariate(coeffs: list, i: int, layout: Layout) -> dict:
    s = layout.shifts[i]
    r = {}
    for e, cp in enumerate(coeffs):
        off = e << s
        for k, c in cp.items():
            r[k + off] = c
    return r


def _strip(A: list) -> list:
    while A and not A[-1]:
        A.pop()
    return A


def prem(A: list, B: list) -> list:
    """Pseudo-remainder of lc(B)^(deg A - deg B + 1) * A by B."""
    n = len(B) - 1
    R = list(A)
    e = len(A) - len(B) + 1
    if e <= 0:
        return R
    lb = B[-1]
    while R and len(R) - 1 >= n:
        d = len(R) - 1
        lr = R[-1]
        off = d - n
        R = [mul(lb, r) if r else r for r in R]
        for j, bc in enumerate(B):
            if bc:
                R[j + off] = sub(R[j + off], mul(lr, bc))
        _strip(R)
        e -= 1
    if e > 0 and R:
        f = power(lb, e)
        R = [mul(f, r) for r in R]
    return R


def resultant_subresultant(A: list, B: list, layout: Layout) -> dict:
    """Resultant of two univariate views via the subresultant PRS."""
    A = _strip(list(A))
    B = _strip(list(B))
    if not A or not B:
        return {}
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 and (len(B) - 1) % 2:
            s = -1
    if len(B) == 1:
        return scale(power(B[0], len(A) - 1), s)
    g = {0: 1}
    h = {0: 1}
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = prem(A, B)
        if not R:
            return {}
        A = B
        div = mul(g, power(h, delta))
        B = [divexact(r, div, layout) if r else r for r in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = divexact(power(g, delta), power(h, delta - 1), layout)
        if len(B) == 1:
            break
    da = len(A) - 1
    if da == 1:
        h = B[0]
    else:
        h = divexact(power(B[0], da), power(h, da - 1), layout)
    return scale(h, s)


def sylvester(A: list, B: list) -> list:
    m, n = len(A) - 1, len(B) - 1
    N = m + n
    M = [[{} for _ in range(N)] for _ in range(N)]
    for r in range(n):
        for j, c in enumerate(reversed(A)):
            M[r][r + j] = c
    for r in range(m):
        for j, c in enumerate(reversed(B)):
            M[n + r][r + j] = c
    return M


def det_bareiss(M: list, layout: Layout) -> dict:
    """Fraction-free determinant of a square matrix of polynomial entries."""
    N = len(M)
    if N == 0:
        return {0: 1}
    M = [row[:] for row in M]
    sign = 1
    prev = {0: 1}
    for k in range(N - 1):
        if not M[k][k]:
            for i in range(k + 1, N):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return {}
        pivot = M[k][k]
        for i in range(k + 1, N):
            rik = M[i][k]
            row_i = M[i]
            row_k = M[k]
            for j in range(k + 1, N):
                v = mul(pivot, row_i[j])
                if rik and row_k[j]:
                    v = sub(v, mul(rik, row_k[j]))
                row_i[j] = divexact(v, prev, layout) if v else v
            row_i[k] = {}
        prev = pivot
    return scale(M[N - 1][N - 1], sign)


def resultant_bareiss(A: list, B: list, layout: Layout) -> dict:
    A = _strip(list(A))
    B = _strip(list(B))
    if not A or not B:
        return {}
    if len(A) == 1 and len(B) == 1:
        return {0: 1}
    return det_bareiss(sylvester(A, B), layout)


# --- gcd ------------------------------------------------------------------

def _positive(p: dict) -> dict:
    if p and p[max(p)] < 0:
        return neg(p)
    return p


def gcd(p: dict, q: dict, layout: Layout) -> dict:
    """Greatest common divisor in Z[x], positive leading coefficient (lex)."""
    if not p:
        return _positive(q)
    if not q:
        return _positive(p)
    if is_const(p) or is_const(q):
        return {0: igcd(content_int(p), content_int(q))}
    h = heu_gcd(p, q, layout)
    if h is not None:
        return _positive(h)
    return prs_gcd(p, q, layout)


def prs_gcd(p: dict, q: dict, layout: Layout) -> dict:
    """Recursive content / subresultant-PRS gcd (the reference route)."""
    if not p:
        return _positive(q)
    if not q:
        return _positive(p)
    if is_const(p) or is_const(q):
        return {0: igcd(content_int(p), content_int(q))}
    dp = [degree_in(p, i, layout) for i in range(layout.n)]
    dq = [degree_in(q, i, layout) for i in range(layout.n)]
    one_sided = [i for i in range(layout.n) if (dp[i] > 0) != (dq[i] > 0)]
    if one_sided:
        i = one_sided[0]
        if dp[i] > 0:
            return prs_gcd(content(p, i, layout), q, layout)
        return prs_gcd(p, content(q, i, layout), layout)
    both = [i for i in range(layout.n) if dp[i] > 0]
    i = min(both, key=lambda j: (max(dp[j], dq[j]), j))
    cp = content(p, i, layout)
    cq = content(q, i, layout)
    c = prs_gcd(cp, cq, layout)
    A = to_univariate(divexact(p, cp, layout), i, layout)
    B = to_univariate(divexact(q, cq, layout), i, layout)
    g = _prs_gcd(A, B, i, layout)
    return _positive(mul(c, g))


def content(p: dict, i: int, layout: Layout) -> dict:
    """Content of p viewed as a polynomial in variable i (sign: positive)."""
    coeffs = sorted((c for c in to_univariate(p, i, layout) if c), key=len)
    g: dict = {}
    for c in coeffs:
        g = gcd(g, c, layout)
        if is_const(g) and g.get(0) == 1:
            break
    return _positive(g)


def primitive_part(p: dict, i: int, layout: Layout) -> dict:
    return divexact(p, content(p, i, layout), layout)


def _prs_gcd(A: list, B: list, i: int, layout: Layout) -> dict:
    if len(A) < len(B):
        A, B = B, A
    if len(B) == 1:
        return {0: 1}
    g = {0: 1}
    h = {0: 1}
    while True:
        delta = len(A) - len(B)
        R = prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return {0: 1}
        A = B
        div = mul(g, power(h, delta))
        B = [divexact(r, div, layout) if r else r for r in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = divexact(power(g, delta), power(h, delta - 1), layout)
    return _positive(primitive_part(from_univariate(B, i, layout), i, layout))


# --- heuristic gcd ----------------------------------------------------------------
# Evaluate one variable at a large integer, recurse, and rebuild the
# candidate from its balanced base-x digits; a candidate is accepted only
# after exact trial division, otherwise the caller falls back to the PRS.

_HEU_TRIES = 6


def _isqrt(n: int) -> int:
    from math import isqrt
    return isqrt(n)


def _eval_var(p: dict, i: int, x: int, layout: Layout) -> dict:
    s = layout.shifts[i]
    field = MASK << s
    r: dict = {}
    for k, c in p.items():
        e = (k >> s) & MASK
        kk = k & ~field
        r[kk] = r.get(kk, 0) + c * x ** e
    return {k: c for k, c in r.items() if c}


def _interpolate(h: dict, i: int, x: int, layout: Layout) -> dict:
    s = layout.shifts[i]
    out: dict = {}
    e = 0
    half = x // 2
    while h:
        digit = {}
        for k, c in h.items():
            r = c % x
            if r > half:
                r -= x
            if r:
                digit[k] = r
        for k, c in digit.items():
            out[k + (e << s)] = c
        h = {k: (c - digit.get(k, 0)) // x for k, c in h.items()}
        h = {k: c for k, c in h.items() if c}
        e += 1
        if e > MAX_EXP:
            return {}
    return out


def heu_gcd(p: dict, q: dict, layout: Layout):
    """Heuristic gcd; returns None when no candidate survives verification."""
    if is_const(p) or is_const(q):
        return {0: igcd(content_int(p), content_int(q))}
    cont = igcd(content_int(p), content_int(q))
    p = {k: c // cont for k, c in p.items()}
    q = {k: c // cont for k, c in q.items()}
    dp = [degree_in(p, j, layout) for j in range(layout.n)]
    dq = [degree_in(q, j, layout) for j in range(layout.n)]
    active = [j for j in range(layout.n) if dp[j] > 0 or dq[j] > 0]
    i = active[0]
    pn = max(abs(c) for c in p.values())
    qn = max(abs(c) for c in q.values())
    B = 2 * min(pn, qn) + 29
    x = max(min(B, 99 * _isqrt(B)),
            2 * min(pn // abs(p[max(p)]), qn // abs(q[max(q)])) + 4)
    for _ in range(_HEU_TRIES):
        pe = _eval_var(p, i, x, layout)
        qe = _eval_var(q, i, x, layout)
        if pe and qe:
            he = heu_gcd(pe, qe, layout)
            if he is not None:
                h = _interpolate(he, i, x, layout)
                if h:
                    h = {k: c // content_int(h) for k, c in h.items()}
                    try:
                        divexact(p, h, layout)
                        divexact(q, h, layout)
                    except NotDivisible:
                        pass
                    else:
                        return scale(h, cont)
        x = 73794 * x * _isqrt(_isqrt(x)) // 27011
    return None
