"""Sparse multivariate polynomials over Q with a small text/JSON syntax."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import lcm

from . import _kernel as K

#: Admissible variable names in canonical order (a < b < z < w < t).
VARIABLES = ("a", "b", "z", "w", "t")
_RANK = {v: i for i, v in enumerate(VARIABLES)}


class PolynomialError(ValueError):
    """Base class for polynomial construction and arithmetic errors."""

    code = "exactalg.error"


class ParseError(PolynomialError):
    code = "exactalg.parse"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotDivisibleError(PolynomialError):
    code = "exactalg.not_divisible"

    def __init__(self, remainder: "SparsePoly"):
        super().__init__(f"not divisible (remainder {remainder})")
        self.remainder = remainder


def _sort_vars(names) -> tuple:
    names = set(names)
    bad = names - set(VARIABLES)
    if bad:
        raise PolynomialError(f"unknown variable(s): {', '.join(sorted(bad))}")
    return tuple(sorted(names, key=_RANK.__getitem__))


def grlex_key(exps: tuple, vars: tuple) -> tuple:
    """Graded-lex sort key with variable order a < b < z < w < t."""
    full = [0] * len(VARIABLES)
    for e, v in zip(exps, vars):
        full[_RANK[v]] = e
    return (sum(full),) + tuple(reversed(full))


class SparsePoly:
    """Immutable polynomial with Fraction coefficients.

    ``vars`` is kept in canonical order; ``terms`` maps exponent tuples
    (one slot per variable) to nonzero Fractions.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars=(), terms=None):
        vars = tuple(vars)
        order = _sort_vars(vars)
        if len(order) != len(vars):
            raise PolynomialError("duplicate variable names")
        clean = {}
        if terms:
            perm = [vars.index(v) for v in order]
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != len(vars):
                    raise PolynomialError("exponent vector length mismatch")
                if any(e < 0 for e in exps):
                    raise PolynomialError("negative exponent")
                c = Fraction(c)
                if c:
                    key = tuple(exps[i] for i in perm)
                    c = clean.get(key, 0) + c
                    if c:
                        clean[key] = c
                    else:
                        del clean[key]
        object.__setattr__(self, "vars", order)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # --- construction -----------------------------------------------------

    @classmethod
    def constant(cls, c, vars=()) -> "SparsePoly":
        vars = _sort_vars(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name: str) -> "SparsePoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def parse(cls, text: str) -> "SparsePoly":
        return poly_parse(text)

    # --- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def used_vars(self) -> tuple:
        used = set()
        for exps in self.terms:
            used.update(v for v, e in zip(self.vars, exps) if e)
        return _sort_vars(used)

    def degree(self, v: str | None = None) -> int:
        """Degree in ``v`` (total degree when ``v`` is None); -1 for zero."""
        if not self.terms:
            return -1
        if v is None:
            return max(sum(e) for e in self.terms)
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return max(e[i] for e in self.terms)

    def embed(self, vars) -> "SparsePoly":
        """Same polynomial over a (super)set of variables."""
        order = _sort_vars(set(vars) | set(self.used_vars()))
        if order == self.vars:
            return self
        idx = [self.vars.index(v) if v in self.vars else None for v in order]
        terms = {}
        for exps, c in self.terms.items():
            terms[tuple(exps[i] if i is not None else 0 for i in idx)] = c
        out = SparsePoly.__new__(SparsePoly)
        object.__setattr__(out, "vars", order)
        object.__setattr__(out, "terms", terms)
        object.__setattr__(out, "_hash", None)
        return out

    def trim(self) -> "SparsePoly":
        """Drop variables that do not occur."""
        used = self.used_vars()
        if used == self.vars:
            return self
        idx = [self.vars.index(v) for v in used]
        return SparsePoly(used, {tuple(e[i] for i in idx): c for e, c in self.terms.items()})

    def coefficient(self, monomial: dict) -> Fraction:
        key = tuple(monomial.get(v, 0) for v in self.vars)
        if any(v not in self.vars and e for v, e in monomial.items()):
            return Fraction(0)
        return self.terms.get(key, Fraction(0))

    def leading_term(self):
        """(exponent dict, coefficient) of the grlex-leading term."""
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        exps = max(self.terms, key=lambda e: grlex_key(e, self.vars))
        return dict(zip(self.vars, exps)), self.terms[exps]

    # --- equality ---------------------------------------------------------

    def _canonical_items(self):
        t = self.trim()
        return t.vars, frozenset(t.terms.items())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self._canonical_items() == other._canonical_items()

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._canonical_items()))
        return self._hash

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        return poly_arith("add", self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return poly_arith("sub", self, _coerce(other))

    def __rsub__(self, other):
        return poly_arith("sub", _coerce(other), self)

    def __mul__(self, other):
        return poly_arith("mul", self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return SparsePoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __pow__(self, e: int):
        if e < 0:
            raise PolynomialError("negative power")
        vars, (p,), den = _to_int((self,))
        lay = K.Layout(len(vars))
        return _from_int(vars, K.power(p, e), lay, Fraction(1, den[0] ** e))

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_constant() and not other.is_zero():
            c = next(iter(other.terms.values()))
            return SparsePoly(self.vars, {e: v / c for e, v in self.terms.items()})
        return poly_arith("exact_div", self, other)

    # --- formatting -------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"SparsePoly({format_poly(self)!r})"

    def __call__(self, **values):
        return evaluate(self, values)


def _coerce(x) -> SparsePoly:
    if isinstance(x, SparsePoly):
        return x
    if isinstance(x, (int, Fraction)):
        return SparsePoly.constant(x)
    if isinstance(x, str):
        return poly_parse(x)
    raise TypeError(f"cannot convert {type(x).__name__} to SparsePoly")


# --- int conversion -------------------------------------------------------

def _to_int(polys, vars=None):
    """Common variables, integer dicts on packed keys, and denominators."""
    if vars is None:
        names = set()
        for p in polys:
            names.update(p.vars)
        vars = _sort_vars(names)
    lay = K.Layout(len(vars))
    out, dens = [], []
    for p in polys:
        p = p.embed(vars)
        den = reduce(lcm, (c.denominator for c in p.terms.values()), 1)
        out.append({lay.pack(e): int(c * den) for e, c in p.terms.items()})
        dens.append(den)
    return vars, out, dens


def _from_int(vars, p: dict, lay: K.Layout, factor=Fraction(1)) -> SparsePoly:
    out = SparsePoly.__new__(SparsePoly)
    object.__setattr__(out, "vars", tuple(vars))
    object.__setattr__(
        out, "terms", {lay.unpack(k): Fraction(c) * factor for k, c in p.items()}
    )
    object.__setattr__(out, "_hash", None)
    return out


# --- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # trailing whitespace
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", int(m.group(1)), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                self.tokens.append(("op", m.group(3), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> SparsePoly:
        if not self.tokens:
            raise ParseError("empty expression", 0)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return p

    def expr(self) -> SparsePoly:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> SparsePoly:
        sign = 1
        kind, val, _ = self.peek()
        while kind == "op" and val in "+-":
            self.take()
            if val == "-":
                sign = -sign
            kind, val, _ = self.peek()
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                acc = acc * self.factor()
            else:
                break
        return -acc if sign < 0 else acc

    def factor(self) -> SparsePoly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^",):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("expected integer exponent", pos)
            base = base ** val
        return base

    def atom(self) -> SparsePoly:
        kind, val, pos = self.take()
        if kind == "int":
            k2, v2, p2 = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, den, p3 = self.take()
                if k3 != "int":
                    raise ParseError("expected integer denominator", p3)
                if den == 0:
                    raise ParseError("zero denominator", p3)
                return SparsePoly.constant(Fraction(val, den))
            return SparsePoly.constant(val)
        if kind == "name":
            if val not in _RANK:
                raise ParseError(f"unknown variable {val!r}", pos)
            return SparsePoly.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def poly_parse(text: str) -> SparsePoly:
    """Parse ``text`` such as ``"3/2*z^2*w - w"`` into a SparsePoly.

    Juxtaposition multiplies (``2zw``); parentheses are accepted as well.
    """
    return _Parser(text).parse().trim()


def format_poly(p: SparsePoly) -> str:
    if not p.terms:
        return "0"
    order = sorted(p.terms, key=lambda e: grlex_key(e, p.vars), reverse=True)
    parts = []
    for exps in order:
        c = p.terms[exps]
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, exps) if e
        )
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def poly_to_json(p: SparsePoly) -> dict:
    order = sorted(p.terms, key=lambda e: grlex_key(e, p.vars), reverse=True)
    return {
        "vars": list(p.vars),
        "terms": [{"coeff": str(p.terms[e]), "exp": list(e)} for e in order],
    }


def poly_from_json(data: dict) -> SparsePoly:
    vars = tuple(data["vars"])
    terms = {}
    for t in data["terms"]:
        c = t["coeff"]
        if not isinstance(c, str):
            raise PolynomialError("JSON coefficients must be strings")
        c = Fraction(c)
        exps = tuple(int(e) for e in t["exp"])
        terms[exps] = terms.get(exps, 0) + c
    return SparsePoly(vars, terms)


# --- arithmetic -----------------------------------------------------------

def poly_arith(op: str, p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Exact add/sub/mul/exact_div on SparsePoly values."""
    if op in ("add", "sub"):
        vars = _sort_vars(set(p.vars) | set(q.vars))
        p, q = p.embed(vars), q.embed(vars)
        terms = dict(p.terms)
        sgn = 1 if op == "add" else -1
        for e, c in q.terms.items():
            v = terms.get(e, 0) + sgn * c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        out = SparsePoly.__new__(SparsePoly)
        object.__setattr__(out, "vars", vars)
        object.__setattr__(out, "terms", terms)
        object.__setattr__(out, "_hash", None)
        return out
    vars, (ip, iq), (dp, dq) = _to_int((p, q))
    lay = K.Layout(len(vars))
    if op == "mul":
        return _from_int(vars, K.mul(ip, iq), lay, Fraction(1, dp * dq))
    if op == "exact_div":
        if not iq:
            raise ZeroDivisionError("polynomial division by zero")
        cq = K.content_int(iq)
        prim = {k: c // cq for k, c in iq.items()}
        try:
            quo = K.divexact(ip, prim, lay)
        except K.NotDivisible:
            raise NotDivisibleError(_remainder(p, q)) from None
        return _from_int(vars, quo, lay, Fraction(dq, dp * cq))
    raise PolynomialError(f"unknown operation {op!r}")


def _remainder(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Remainder of multivariate division of p by q (grlex leading terms)."""
    vars = _sort_vars(set(p.vars) | set(q.vars))
    p, q = p.embed(vars), q.embed(vars)
    key = lambda e: grlex_key(e, vars)
    lq = max(q.terms, key=key)
    cq = q.terms[lq]
    r = dict(p.terms)
    rem = {}
    while r:
        m = max(r, key=key)
        c = r.pop(m)
        t = tuple(a - b for a, b in zip(m, lq))
        if any(x < 0 for x in t):
            rem[m] = c
            continue
        f = c / cq
        for e, d in q.terms.items():
            if e == lq:
                continue
            k = tuple(a + b for a, b in zip(e, t))
            v = r.get(k, 0) - f * d
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return SparsePoly(vars, rem)


def partial_derivative(p: SparsePoly, v: str) -> SparsePoly:
    if v not in _RANK:
        raise PolynomialError(f"unknown variable {v!r}")
    if v not in p.vars:
        return SparsePoly(p.vars, {})
    i = p.vars.index(v)
    terms = {}
    for e, c in p.terms.items():
        if e[i]:
            k = e[:i] + (e[i] - 1,) + e[i + 1:]
            terms[k] = c * e[i]
    return SparsePoly(p.vars, terms)


def substitute(p: SparsePoly, mapping: dict) -> SparsePoly:
    """Replace variables by polynomials (``{"z": q, ...}``)."""
    out = SparsePoly.constant(0)
    cache = {}
    for exps, c in p.terms.items():
        term = SparsePoly.constant(c)
        for v, e in zip(p.vars, exps):
            if not e:
                continue
            if v in mapping:
                key = (v, e)
                if key not in cache:
                    cache[key] = _coerce(mapping[v]) ** e
                term = term * cache[key]
            else:
                term = term * SparsePoly((v,), {(e,): 1})
        out = out + term
    return out


def rename(p: SparsePoly, mapping: dict) -> SparsePoly:
    """Rename variables, e.g. ``{"a": "z", "b": "w"}``."""
    names = [mapping.get(v, v) for v in p.vars]
    if len(set(names)) != len(names):
        raise PolynomialError("renaming collapses variables")
    return SparsePoly(names, p.terms)


def dilate(p: SparsePoly) -> SparsePoly:
    """P(z, w) -> P(a z, b w) over (a, b, z, w)."""
    if {"a", "b"} & set(p.used_vars()):
        raise PolynomialError("dilate expects a polynomial in z, w only")
    bad = set(p.used_vars()) - {"z", "w"}
    if bad:
        raise PolynomialError(f"dilate expects z, w only, got {sorted(bad)}")
    p = p.embed(("z", "w"))
    iz, iw = p.vars.index("z"), p.vars.index("w")
    terms = {}
    for e, c in p.terms.items():
        i, j = e[iz], e[iw]
        terms[(i, j, i, j)] = c
    return SparsePoly(("a", "b", "z", "w"), terms)


def monomial_multiply(p: SparsePoly, exps: dict) -> SparsePoly:
    vars = _sort_vars(set(p.vars) | set(exps))
    p = p.embed(vars)
    off = tuple(exps.get(v, 0) for v in vars)
    return SparsePoly(vars, {tuple(a + b for a, b in zip(e, off)): c for e, c in p.terms.items()})


def min_exponents(p: SparsePoly) -> dict:
    if not p.terms:
        return {v: 0 for v in p.vars}
    return {v: min(e[i] for e in p.terms) for i, v in enumerate(p.vars)}


def strip_monomial(p: SparsePoly, vars=None):
    """Divide out the largest monomial factor; return (quotient, exponents)."""
    mins = min_exponents(p)
    if vars is not None:
        mins = {v: (e if v in vars else 0) for v, e in mins.items()}
    if not any(mins.values()):
        return p, {}
    off = tuple(mins[v] for v in p.vars)
    q = SparsePoly(p.vars, {tuple(a - b for a, b in zip(e, off)): c for e, c in p.terms.items()})
    return q, {v: e for v, e in mins.items() if e}


def evaluate(p: SparsePoly, point: dict):
    """Horner evaluation; exact for Fraction/int input, float/complex otherwise."""
    used = p.used_vars()
    missing = [v for v in used if v not in point]
    if missing:
        raise PolynomialError(f"missing assignment for {', '.join(missing)}")
    if not p.terms:
        return Fraction(0)
    exact = all(isinstance(point[v], (int, Fraction)) for v in used)
    vals = [point[v] if v in point else 0 for v in p.vars]
    if not exact:
        vals = [complex(x) for x in vals]
    coeffs = [(e, c if exact else complex(c)) for e, c in p.terms.items()]
    result = _horner(coeffs, vals, 0)
    if not exact and all(isinstance(point[v], (int, float, Fraction)) for v in used):
        return result.real
    return result


def _horner(terms, vals, i):
    if i == len(vals):
        return sum(c for _, c in terms)
    groups: dict = {}
    for e, c in terms:
        groups.setdefault(e[i], []).append((e, c))
    x = vals[i]
    acc = 0
    top = max(groups)
    for d in range(top, -1, -1):
        acc = acc * x
        if d in groups:
            acc = acc + _horner(groups[d], vals, i + 1)
    return acc


def coefficient_in(p: SparsePoly, v: str, k: int) -> SparsePoly:
    """Coefficient of ``v**k`` as a polynomial in the remaining variables."""
    if v not in p.vars:
        return p if k == 0 else SparsePoly((), {})
    i = p.vars.index(v)
    rest = p.vars[:i] + p.vars[i + 1:]
    return SparsePoly(rest, {e[:i] + e[i + 1:]: c for e, c in p.terms.items() if e[i] == k})
