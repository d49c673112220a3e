"""向量场数据层：多项式、除子、向量场与 Aut(ℂ) 作用。"""

from .core import (
    Diagnostic,
    divisor_of,
    evaluate_field,
    field_from_divisor,
    field_values,
    fields_close,
    make_field,
    pullback,
    require_valid,
    roots_of,
    validate,
)
from .loader import emit_field, parse_affine, parse_field, parse_tolerances
from .poly_core import (
    Polynomial,
    affine_substitute,
    evaluate_poly,
    expand_from_roots,
    find_roots,
    poly_add,
    poly_mul,
    poly_values,
)
from .schema import AffineMap, Divisor, RootMultiset, VectorField

__all__ = [
    'AffineMap',
    'Diagnostic',
    'Divisor',
    'Polynomial',
    'RootMultiset',
    'VectorField',
    'affine_substitute',
    'divisor_of',
    'emit_field',
    'evaluate_field',
    'evaluate_poly',
    'expand_from_roots',
    'field_from_divisor',
    'field_values',
    'fields_close',
    'find_roots',
    'make_field',
    'parse_affine',
    'parse_field',
    'parse_tolerances',
    'poly_add',
    'poly_mul',
    'poly_values',
    'pullback',
    'require_valid',
    'roots_of',
    'validate',
]
