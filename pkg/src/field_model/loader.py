"""字段文档（FieldDocument）的统一加载入口。

文档格式（JSON）：
    {
      "lambda": [re, im],
      "Q": {"roots": [[re, im] | [[re, im], mult], ...]} 或 {"coeffs": [[re, im], ...]},
      "P": 同上,
      "E": 同上（roots 形式可带 "leading": [re, im] 作为 c₀）,
      "tolerances": {"symmetry": 1e-7, ...}   # 可选
    }

- 复数一律写成两元素数组，不解析 "a+bi" 字符串
- coeffs 形式按降幂；Q、P 的首项系数并入 λ
- 缺省的 Q、P 视为 1，缺省的 E 视为 0
"""

from __future__ import annotations

import json
import math
from typing import Any, Dict, List, Optional, Tuple

from src.config import Tolerances, default_tolerances
from src.errors import EssFieldError, ParseError, ValidationError

from .core import make_field, validate
from .poly_core import Polynomial, expand_from_roots
from .schema import AffineMap, RootMultiset, VectorField, complex_to_list


def parse_complex(value: Any, location: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ParseError("expected a complex number as [re, im]", location)
    z = complex(float(value[0]), float(value[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError("complex number must be finite", location)
    return z


def _is_complex_literal(value: Any) -> bool:
    return (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    )


def parse_root_list(items: Any, location: str) -> RootMultiset:
    if not isinstance(items, list):
        raise ParseError("roots must be a list", location)
    pairs: List[Tuple[complex, int]] = []
    for i, item in enumerate(items):
        loc = f"{location}[{i}]"
        if _is_complex_literal(item):
            pairs.append((parse_complex(item, loc), 1))
            continue
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError("expected [re, im] or [[re, im], multiplicity]", loc)
        z = parse_complex(item[0], f"{loc}[0]")
        mult = item[1]
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise ParseError("multiplicity must be a positive integer", f"{loc}[1]")
        pairs.append((z, mult))
    return RootMultiset.from_pairs(pairs)


def parse_polynomial(spec: Any, location: str, default: Optional[Polynomial] = None) -> Polynomial:
    if spec is None:
        if default is None:
            raise ParseError("missing polynomial", location)
        return default
    if not isinstance(spec, dict):
        raise ParseError("polynomial must be an object with 'roots' or 'coeffs'", location)
    has_roots, has_coeffs = 'roots' in spec, 'coeffs' in spec
    if has_roots == has_coeffs:
        raise ParseError("exactly one of 'roots' / 'coeffs' is required", location)

    if has_roots:
        roots = parse_root_list(spec['roots'], f"{location}.roots")
        leading = parse_complex(spec['leading'], f"{location}.leading") if 'leading' in spec else 1 + 0j
        if leading == 0:
            raise ParseError("leading coefficient must be nonzero", f"{location}.leading")
        return expand_from_roots(leading, roots)

    items = spec['coeffs']
    if not isinstance(items, list) or not items:
        raise ParseError("coeffs must be a non-empty list", f"{location}.coeffs")
    coeffs = [parse_complex(c, f"{location}.coeffs[{i}]") for i, c in enumerate(items)]
    return Polynomial.from_coeffs(coeffs)


def parse_tolerances(doc: Dict[str, Any]) -> Tolerances:
    overrides = doc.get('tolerances') if isinstance(doc, dict) else None
    if overrides is None:
        return default_tolerances()
    if not isinstance(overrides, dict):
        raise ParseError("tolerances must be an object", '$.tolerances')
    try:
        return default_tolerances().with_overrides(overrides)
    except (TypeError, ValueError) as e:
        raise ParseError(str(e), '$.tolerances') from e


def parse_field(doc: Any, tol: Optional[Tolerances] = None) -> VectorField:
    """FieldDocument -> VectorField。

    roots 形式经 expand_from_roots；coeffs 形式经首一化（首项并入 λ）。
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from e
    if not isinstance(doc, dict):
        raise ParseError("field document must be an object", '$')
    if 'lambda' not in doc:
        raise ParseError("missing 'lambda'", '$')
    tol = tol or parse_tolerances(doc)

    lam = parse_complex(doc['lambda'], '$.lambda')
    one = Polynomial.constant(1)
    Q = parse_polynomial(doc.get('Q'), '$.Q', one)
    P = parse_polynomial(doc.get('P'), '$.P', one)
    E = parse_polynomial(doc.get('E'), '$.E', Polynomial.zero())
    if Q.is_zero:
        raise ParseError("Q must not be the zero polynomial", '$.Q')
    if P.is_zero:
        raise ParseError("P must not be the zero polynomial", '$.P')

    try:
        X = make_field(lam, Q, P, E, tol)
    except EssFieldError as e:
        raise ValidationError(str(e), [e.message]) from e
    problems = validate(X, tol)
    if problems:
        raise ValidationError("field violates invariants", problems)
    return X


def emit_field(X: VectorField, tol: Optional[Tolerances] = None) -> Dict[str, Any]:
    """VectorField -> FieldDocument（coeffs 形式，系数逐位保留）。"""
    doc: Dict[str, Any] = {
        'lambda': complex_to_list(X.lam),
        'Q': {'coeffs': [complex_to_list(c) for c in X.Q.coeffs]},
        'P': {'coeffs': [complex_to_list(c) for c in X.P.coeffs]},
        'E': {'coeffs': [complex_to_list(c) for c in X.E.coeffs]},
        'signature': list(X.signature),
    }
    if tol is not None and tol != default_tolerances():
        doc['tolerances'] = tol.to_dict()
    return doc


def parse_affine(doc: Any, location: str = '$') -> AffineMap:
    if not isinstance(doc, dict) or 'a' not in doc:
        raise ParseError("affine map must be an object with 'a' (and optional 'b')", location)
    a = parse_complex(doc['a'], f"{location}.a")
    b = parse_complex(doc.get('b', [0, 0]), f"{location}.b")
    if a == 0:
        raise ParseError("affine map requires a != 0", f"{location}.a")
    return AffineMap(a, b)
