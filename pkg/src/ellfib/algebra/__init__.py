"""Exact arithmetic over QQ and QQ(a): polynomials, rational functions and places."""

from ellfib.algebra.factor import (
    Answer,
    LinearFactorization,
    is_square_in_field,
    linear_factors_over_parameter,
    poly_gcd,
    poly_lcm,
    rational_roots,
    specialize_element,
    specialize_poly,
    squarefree_decomposition,
    squarefree_part,
)
from ellfib.algebra.fields import (
    QQ,
    CoercionError,
    FracField,
    Poly,
    PolyRing,
    RationalFunction,
    tower,
)
from ellfib.algebra.places import (
    Place,
    PlaceError,
    leading_term,
    multiplicity,
    reduce_at,
    valuation_at,
)

__all__ = [
    "QQ",
    "Answer",
    "CoercionError",
    "FracField",
    "LinearFactorization",
    "Place",
    "PlaceError",
    "Poly",
    "PolyRing",
    "RationalFunction",
    "is_square_in_field",
    "leading_term",
    "linear_factors_over_parameter",
    "multiplicity",
    "poly_gcd",
    "poly_lcm",
    "rational_roots",
    "reduce_at",
    "specialize_element",
    "specialize_poly",
    "squarefree_decomposition",
    "squarefree_part",
    "tower",
    "valuation_at",
]
