"""Exact arithmetic: finite fields, polynomials, rational functions, rationals."""

from .finite_field import (
    GF,
    FFElem,
    FiniteField,
    count_squares,
    ff_arith,
    find_nonsquare_shift,
    is_prime,
    prime_power,
    quadratic_character,
)
from .literals import (
    LiteralError,
    format_poly,
    format_rational,
    format_ratfunc,
    format_scalar,
    parse_rational,
    parse_ratfunc,
    parse_scalar,
)
from .poly import (
    Poly,
    crt,
    factor,
    inverse_mod,
    is_irreducible,
    monic_irreducibles,
    monic_polys,
    poly_gcd,
    poly_sqrt,
    polys_up_to,
    squarefree_decomposition,
    xgcd,
)
from .ratfunc import BigRational, RatFunc

__all__ = [
    "GF", "FFElem", "FiniteField", "count_squares", "ff_arith", "find_nonsquare_shift",
    "is_prime", "prime_power", "quadratic_character", "LiteralError", "format_poly",
    "format_rational", "format_ratfunc", "format_scalar", "parse_rational", "parse_ratfunc",
    "parse_scalar", "Poly", "crt", "factor", "inverse_mod", "is_irreducible",
    "monic_irreducibles", "monic_polys", "poly_gcd", "poly_sqrt", "polys_up_to",
    "squarefree_decomposition", "xgcd", "BigRational", "RatFunc",
]
