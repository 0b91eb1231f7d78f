"""Exact rational arithmetic and sparse polynomial algebra."""

from fractions import Fraction as Rational

from .elimination import (
    METHODS,
    ResultantError,
    content,
    normalize,
    poly_gcd,
    resultant,
    squarefree_decomposition,
    squarefree_full,
    sturm_real_roots,
    sturm_sequence,
    wronskian,
)
from .poly import (
    VARIABLES,
    coefficient_in,
    NotDivisibleError,
    ParseError,
    PolynomialError,
    SparsePoly,
    dilate,
    evaluate,
    format_poly,
    min_exponents,
    monomial_multiply,
    partial_derivative,
    poly_arith,
    poly_from_json,
    poly_parse,
    poly_to_json,
    rename,
    strip_monomial,
    substitute,
)

__all__ = [
    "METHODS", "VARIABLES", "NotDivisibleError", "ParseError", "PolynomialError",
    "Rational", "ResultantError", "SparsePoly", "coefficient_in", "content", "dilate", "evaluate",
    "format_poly", "min_exponents", "monomial_multiply", "normalize",
    "partial_derivative", "poly_arith", "poly_from_json", "poly_gcd", "poly_parse",
    "poly_to_json", "rename", "resultant", "squarefree_decomposition",
    "squarefree_full", "strip_monomial", "sturm_real_roots", "sturm_sequence",
    "substitute", "wronskian",
]
