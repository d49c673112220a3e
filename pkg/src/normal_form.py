"""
规范形模块 - Aut(ℂ) 作用下的代表元（解析分类）与 Aut(ℂ)×S¹ 下的代表元（度量分类）

三种整体截面（gauge）：
- exp_centered：b = E 的重心，a = (1/c₀)^{1/d}，得到 e^{w^d + c̃₂w^{d−2} + …}
- zero_centered：b = Z 的重心
- pole_centered：b = P 的重心（−b₁/r）

d 个分支里取系数元组字典序最小者，代表元因此唯一。
元组顺序：λ̃，Q̃ 除首项外的系数，P̃ 除首项外的系数，Ẽ 除首项外的系数（降幂）。
Ẽ 的常数项统一并入 λ̃。
"""

from __future__ import annotations

import cmath
import functools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from src.config import Tolerances, default_tolerances
from src.errors import RangeOverflowError, UnsupportedGaugeError
from src.field_model import AffineMap, Polynomial, VectorField, pullback
from src.field_model.enums import EquivalenceMode, GaugeKind
from src.field_model.loader import emit_field

logger = logging.getLogger(__name__)

GAUGE_PRIORITY = (GaugeKind.EXP_CENTERED, GaugeKind.ZERO_CENTERED, GaugeKind.POLE_CENTERED)

# 分支比较时视为相等的相对误差
_TIE_TOL = 1e-8


@dataclass(frozen=True)
class CanonicalForm:
    field: VectorField
    gauge: AffineMap
    gauge_kind: GaugeKind

    def coefficient_tuple(self) -> Tuple[complex, ...]:
        return coefficient_tuple(self.field)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'field': emit_field(self.field),
            'gauge': self.gauge.to_dict(),
            'gauge_kind': self.gauge_kind.label,
        }


class Equivalence(NamedTuple):
    witness: AffineMap
    theta: float

    def to_dict(self) -> Dict[str, Any]:
        return {'witness': self.witness.to_dict(), 'theta': self.theta}


def coefficient_tuple(X: VectorField) -> Tuple[complex, ...]:
    parts: List[complex] = [X.lam]
    parts.extend(X.Q.coeffs[1:])
    parts.extend(X.P.coeffs[1:])
    if X.d:
        parts.extend(X.E.coeffs[1:])
    return tuple(parts)


def tuples_close(t1: Sequence[complex], t2: Sequence[complex], rel_tol: float) -> bool:
    if len(t1) != len(t2):
        return False
    return all(abs(x - y) <= rel_tol * max(1.0, abs(x), abs(y)) for x, y in zip(t1, t2))


def _compare_tuples(t1: Sequence[complex], t2: Sequence[complex], rel_tol: float = _TIE_TOL) -> int:
    """带容差的 (Re, Im) 字典序比较。"""
    for x, y in zip(t1, t2):
        scale = rel_tol * max(1.0, abs(x), abs(y))
        for u, v in ((x.real, y.real), (x.imag, y.imag)):
            if abs(u - v) > scale:
                return -1 if u < v else 1
    return 0


def wrap_angle(theta: float) -> float:
    """映射到 (−π, π]。"""
    theta = math.remainder(theta, 2 * math.pi)
    if theta <= -math.pi:
        theta += 2 * math.pi
    return theta


# -------------------------
# gauge 的可用性与参数
# -------------------------


def available_gauges(signature: Tuple[int, int, int]) -> List[GaugeKind]:
    s, r, d = signature
    out = []
    if d >= 2 or (d == 1 and s == 0 and r == 0):
        out.append(GaugeKind.EXP_CENTERED)
    if s >= 1:
        out.append(GaugeKind.ZERO_CENTERED)
    if r >= 1:
        out.append(GaugeKind.POLE_CENTERED)
    return out


def default_gauge(signature: Tuple[int, int, int]) -> GaugeKind:
    available = available_gauges(signature)
    for kind in GAUGE_PRIORITY:
        if kind in available:
            return kind
    raise UnsupportedGaugeError(f"no global section exists for signature {signature}", {'signature': list(signature)})


def _barycenter_from_coeffs(p: Polynomial) -> complex:
    # 首一化后的 −c₁/n
    return -p.coeffs[1] / (p.leading * p.degree)


def _fold_exponent_constant(X: VectorField, tol: Tolerances) -> VectorField:
    if not X.d:
        return X
    c = X.E.coeffs[-1]
    if c == 0:
        return X
    if abs(c.real) > tol.exp_overflow:
        raise RangeOverflowError(f"folding the exponent constant {c} into lambda overflows")
    E = Polynomial.from_coeffs(X.E.coeffs[:-1] + (0j,))
    return VectorField(X.lam * cmath.exp(c), X.Q, X.P, E)


def _roots_of_value(value: complex, n: int) -> List[complex]:
    """value 的全部 n 次方根（主值乘以单位根，顺序固定）。"""
    base = value ** (1.0 / n)
    return [base * cmath.exp(2j * math.pi * l / n) for l in range(n)]


def _centered_coefficients(X: VectorField, b: complex) -> List[Tuple[int, complex]]:
    """平移 b 后 Q、P 的 (下降次数 j, 系数) 列表（a = 1），用于 d = 0 的缩放归一。"""
    centered = pullback(X, AffineMap(1, b))
    out = []
    for poly in (centered.Q, centered.P):
        for j, c in enumerate(poly.coeffs[1:], start=1):
            out.append((j, c))
    return out


def _first_significant(coeffs: List[Tuple[int, complex]]) -> Optional[Tuple[int, complex]]:
    # 齐次尺度 R = max |c_j|^{1/j}；|c_j| ≤ 1e−9·R^j 视为 0（与缩放无关）
    radius = max((abs(c) ** (1.0 / j) for j, c in coeffs if c != 0), default=0.0)
    if radius == 0:
        return None
    for j, c in coeffs:
        if abs(c) > 1e-9 * radius ** j:
            return j, c
    return None


def _scale_candidates(X: VectorField, b: complex, metric: bool) -> List[complex]:
    s, r, d = X.signature
    m = s - r - 1
    if d >= 1:
        return _roots_of_value(1 / X.c0, d)

    if m != 0:
        # λ·a^m = 1
        unit_lambda = _roots_of_value(1 / X.lam, m) if m > 0 else _roots_of_value(X.lam, -m)
        if not metric:
            return unit_lambda
        modulus = abs(X.lam) ** (-1.0 / m)
        lead = _first_significant(_centered_coefficients(X, b))
        if lead is None:
            return unit_lambda
        j, c = lead
        # 让 c_j / a^j ∈ ℝ⁺
        return [modulus * cmath.exp(1j * (cmath.phase(c) + 2 * math.pi * l) / j) for l in range(j)]

    # s = r+1：λ 是模不变量，用第一个显著系数归一为 1
    lead = _first_significant(_centered_coefficients(X, b))
    if lead is None:
        return [1 + 0j]
    j, c = lead
    return _roots_of_value(c, j)


def _translation(X: VectorField, kind: GaugeKind) -> complex:
    if kind == GaugeKind.ZERO_CENTERED:
        return _barycenter_from_coeffs(X.Q)
    if kind == GaugeKind.POLE_CENTERED:
        return _barycenter_from_coeffs(X.P)
    if X.d == 1:
        # E = c₀z + c₁：折叠常数后由平移把 λ̃ 归一为 1（λ·c₀·e^{c₀b + c₁} = 1）
        c0, c1 = X.E.coeffs
        return (-cmath.log(X.lam * c0) - c1) / c0
    return _barycenter_from_coeffs(X.E)


def _candidates(X: VectorField, kind: GaugeKind, tol: Tolerances, metric: bool) -> List[Tuple[CanonicalForm, float]]:
    if kind not in available_gauges(X.signature):
        raise UnsupportedGaugeError(
            f"gauge {kind.label} is not available for signature {X.signature}",
            {'signature': list(X.signature), 'gauge': kind.label},
        )
    b = _translation(X, kind)
    out: List[Tuple[CanonicalForm, float]] = []
    for a in _scale_candidates(X, b, metric):
        G = AffineMap(a, b)
        Y = _fold_exponent_constant(pullback(X, G), tol)
        theta = 0.0
        if metric:
            theta = wrap_angle(cmath.phase(Y.lam))
            Y = VectorField(abs(Y.lam) + 0j, Y.Q, Y.P, Y.E)
        out.append((CanonicalForm(Y, G, kind), theta))
    return out


def _select(candidates: List[Tuple[CanonicalForm, float]]) -> Tuple[CanonicalForm, float]:
    def cmp(x, y):
        c = _compare_tuples(x[0].coefficient_tuple(), y[0].coefficient_tuple())
        if c:
            return c
        # 并列时优先 a 最接近 1 的分支（截面上的点保持 gauge = id）
        dx, dy = abs(x[0].gauge.a - 1), abs(y[0].gauge.a - 1)
        return -1 if dx < dy else (1 if dx > dy else 0)

    ordered = sorted(candidates, key=functools.cmp_to_key(cmp))
    return ordered[0]


def canonical_form(
    X: VectorField,
    gauge_kind: Optional[GaugeKind] = None,
    tol: Optional[Tolerances] = None,
) -> CanonicalForm:
    tol = tol or default_tolerances()
    kind = gauge_kind or default_gauge(X.signature)
    form, _ = _select(_candidates(X, kind, tol, metric=False))
    logger.debug(f"canonical_form[{kind.label}]: gauge a={form.gauge.a:.6g}, b={form.gauge.b:.6g}")
    return form


def canonical_metric_form(
    X: VectorField,
    gauge_kind: Optional[GaugeKind] = None,
    tol: Optional[Tolerances] = None,
) -> Tuple[CanonicalForm, float]:
    """规范形再旋转到 λ̃ ∈ ℝ⁺；θ = arg λ̃ ∈ (−π, π]。

    E(0,0,1) 上 θ 恒为 0：旋转已被平移吸收（λe^{c₀z} 平移后 λ̃ = 1），并不表示无需旋转。
    """
    tol = tol or default_tolerances()
    kind = gauge_kind or default_gauge(X.signature)
    return _select(_candidates(X, kind, tol, metric=True))


def are_equivalent(
    X1: VectorField,
    X2: VectorField,
    mode: EquivalenceMode = EquivalenceMode.ANALYTIC,
    tol: Optional[Tolerances] = None,
) -> Optional[Equivalence]:
    """返回 (T, θ) 使 X2 = e^{iθ}·T*X1；不等价时返回 None。analytic 模式下 θ = 0。"""
    tol = tol or default_tolerances()
    if X1.signature != X2.signature:
        logger.info(f"signatures differ: {X1.signature} vs {X2.signature}")
        return None
    kind = default_gauge(X1.signature)

    if mode == EquivalenceMode.METRIC:
        (f1, t1), (f2, t2) = canonical_metric_form(X1, kind, tol), canonical_metric_form(X2, kind, tol)
        theta = wrap_angle(t2 - t1)
    else:
        f1, f2 = canonical_form(X1, kind, tol), canonical_form(X2, kind, tol)
        theta = 0.0

    if not tuples_close(f1.coefficient_tuple(), f2.coefficient_tuple(), tol.equiv):
        return None
    witness = f1.gauge.compose(f2.gauge.inverse())
    return Equivalence(witness, theta)
