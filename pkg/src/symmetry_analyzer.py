"""
对称性分析模块 - 检测迷向群 Aut(ℂ)_X 并判定整族是否平凡

算术条件：k 必须整除 d 与 s−r−1（集合 𝒟）
几何条件：零点、极点、指数根三个多重集都绕同一中心 C 在 2π/k 旋转下不变
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple, Union

from src.config import Tolerances, default_tolerances
from src.field_model import AffineMap, Divisor, RootMultiset, VectorField, divisor_of
from src.field_model.enums import CenterKind, InfinityKind, IsotropyKind
from src.field_model.schema import match_pairs, complex_to_list

logger = logging.getLogger(__name__)

UNBOUNDED = 'unbounded'

DivisorSet = Union[FrozenSet[int], str]


def _positive_divisors(n: int) -> FrozenSet[int]:
    n = abs(n)
    out = set()
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            out.add(i)
            out.add(n // i)
    return frozenset(out)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % i for i in range(2, math.isqrt(n) + 1))


def common_divisor_set(s: int, r: int, d: int) -> DivisorSet:
    """𝒟 = d 与 s−r−1 的全部正公因子；d = 0 且 s = r+1 时返回 UNBOUNDED。"""
    for name, v in (('s', s), ('r', r), ('d', d)):
        if v < 0:
            raise ValueError(f"{name} must be nonnegative")
    g = math.gcd(d, s - r - 1)
    if g == 0:
        return UNBOUNDED
    return _positive_divisors(g)


# -------------------------
# 重心与旋转匹配
# -------------------------


@dataclass(frozen=True)
class Barycenters:
    zeros: Optional[complex]
    poles: Optional[complex]
    exp_roots: Optional[complex]

    def present(self) -> List[complex]:
        return [c for c in (self.zeros, self.poles, self.exp_roots) if c is not None]

    def to_dict(self) -> Dict[str, Any]:
        def fmt(c):
            return complex_to_list(c) if c is not None else None

        return {'zeros': fmt(self.zeros), 'poles': fmt(self.poles), 'exp_roots': fmt(self.exp_roots)}


def barycenters(div: Divisor) -> Barycenters:
    return Barycenters(div.zeros.barycenter(), div.poles.barycenter(), div.exp_roots.barycenter())


def _polar_key(C: complex):
    def key(p: complex) -> Tuple[float, float]:
        w = p - C
        return (abs(w), math.atan2(w.imag, w.real))

    return key


def rotation_invariant(m: RootMultiset, C: complex, k: int, tol: float) -> bool:
    """{C + e^{i2π/k}(p − C)} 与 m 作为多重集相等（位置误差 ≤ tol，重数相同）。"""
    if k < 2:
        raise ValueError("rotation order must be >= 2")
    if m.is_empty:
        return True
    T = AffineMap.rotation(k, C)
    rotated = m.map(T)
    return match_pairs(m.roots, rotated.roots, tol, key=_polar_key(C))


# -------------------------
# 迷向群
# -------------------------


@dataclass(frozen=True)
class IsotropyResult:
    kind: IsotropyKind
    k: int = 1
    center: Optional[complex] = None
    generator: Optional[AffineMap] = None
    # C 处 X 的类型（极点/零点）与阶数，仅 cyclic 时填写
    center_kind: Optional[CenterKind] = None
    center_multiplicity: int = 0

    @property
    def is_trivial(self) -> bool:
        return self.kind == IsotropyKind.TRIVIAL

    def center_sectors(self) -> Optional[Dict[str, int]]:
        """C 处的扇形：ν 阶极点有 2(ν+1) 个双曲扇形，ν ≥ 2 阶零点有 2(ν−1) 个椭圆扇形。"""
        if self.center_kind == CenterKind.POLE:
            return {'hyperbolic': 2 * (self.center_multiplicity + 1)}
        if self.center_kind == CenterKind.ZERO and self.center_multiplicity >= 2:
            return {'elliptic': 2 * (self.center_multiplicity - 1)}
        return None

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'kind': self.kind.label}
        if self.kind == IsotropyKind.CYCLIC:
            out['k'] = self.k
        out['center'] = complex_to_list(self.center) if self.center is not None else None
        out['generator'] = self.generator.to_dict() if self.generator is not None else None
        if self.center_kind is not None:
            out['center_kind'] = self.center_kind.label
            out['center_multiplicity'] = self.center_multiplicity
            out['center_sectors'] = self.center_sectors()
        return out


def _center_type(div: Divisor, C: complex, radius: float) -> Tuple[Optional[CenterKind], int]:
    nu = div.poles.multiplicity_at(C, radius)
    if nu:
        return CenterKind.POLE, nu
    nu = div.zeros.multiplicity_at(C, radius)
    if nu:
        return CenterKind.ZERO, nu
    return None, 0


def _cyclic(div: Divisor, C: complex, k: int, radius: float) -> IsotropyResult:
    kind, nu = _center_type(div, C, radius)
    return IsotropyResult(
        IsotropyKind.CYCLIC,
        k=k,
        center=C,
        generator=AffineMap.rotation(k, C),
        center_kind=kind,
        center_multiplicity=nu,
    )


def _invariant_everywhere(div: Divisor, C: complex, k: int, radius: float) -> bool:
    return all(rotation_invariant(part, C, k, radius) for part in div.parts())


def isotropy_group(X: VectorField, tol: Optional[Tolerances] = None) -> IsotropyResult:
    """迷向群：先看算术条件 𝒟，再用重心确定中心，最后按 k 降序做旋转匹配。"""
    tol = tol or default_tolerances()
    s, r, d = X.signature
    D = common_divisor_set(s, r, d)
    if D != UNBOUNDED and not any(k > 1 for k in D):
        # 含 λ∂/∂z（𝒟 = {1}）：没有非平凡旋转
        logger.info(f"isotropy: D = {sorted(D)} for {X.signature}, trivial")
        return IsotropyResult(IsotropyKind.TRIVIAL)

    div = divisor_of(X, tol)
    radius = tol.symmetry * max(1.0, div.scale())
    bary = barycenters(div).present()
    C = bary[0]
    if any(abs(c - C) > radius for c in bary[1:]):
        logger.info(f"isotropy: barycenters disagree {bary}, trivial")
        return IsotropyResult(IsotropyKind.TRIVIAL)

    if D == UNBOUNDED:
        if all(abs(p - C) <= radius for part in div.parts() for p in part.locations):
            logger.info(f"isotropy: all divisor mass at {C}, continuous")
            kind, nu = _center_type(div, C, radius)
            return IsotropyResult(IsotropyKind.CONTINUOUS, center=C, center_kind=kind, center_multiplicity=nu)
        candidates = list(range(div.total(), 1, -1))
    else:
        candidates = sorted((k for k in D if k > 1), reverse=True)

    for k in candidates:
        if _invariant_everywhere(div, C, k, radius):
            logger.info(f"isotropy: cyclic of order {k} about {C}")
            return _cyclic(div, C, k, radius)
    return IsotropyResult(IsotropyKind.TRIVIAL)


# -------------------------
# 整族判定
# -------------------------


def infinity_type(s: int, r: int, d: int) -> Dict[str, Any]:
    """∞ 处的奇点类型（Poincaré–Hopf）：d ≥ 1 为本性奇点（2d 个整扇形），否则阶数 μ = 2 − s + r。"""
    if d >= 1:
        return {'kind': InfinityKind.ESSENTIAL.label, 'order': d, 'entire_sectors': 2 * d}
    mu = 2 - s + r
    if mu == 0:
        return {'kind': InfinityKind.REGULAR.label, 'order': 0}
    if mu > 0:
        return {'kind': InfinityKind.ZERO.label, 'order': mu}
    return {'kind': InfinityKind.POLE.label, 'order': -mu}


@dataclass(frozen=True)
class FamilyReport:
    signature: Tuple[int, int, int]
    all_trivial: bool
    moduli_dimension: int
    admissible_orders: Union[FrozenSet[int], str]
    divisor_set: DivisorSet
    infinity: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        def fmt(v):
            return v if isinstance(v, str) else sorted(v)

        return {
            'signature': list(self.signature),
            'all_trivial': self.all_trivial,
            'moduli_dimension': self.moduli_dimension,
            'admissible_orders': fmt(self.admissible_orders),
            'divisor_set': fmt(self.divisor_set),
            'infinity': self.infinity,
        }


def _admissible(k: int, s: int, r: int) -> bool:
    # 恰好一个成立：k|s（C 为极点）或 k|r（C 为零点）
    return (s % k == 0) != (r % k == 0)


def family_report(s: int, r: int, d: int) -> FamilyReport:
    D = common_divisor_set(s, r, d)

    if D == UNBOUNDED:
        # d = 0, s = r+1：gcd(s, r) = 1，可取的 k 是 s 或 r 的因子
        if r == 0:
            admissible: Union[FrozenSet[int], str] = UNBOUNDED
        else:
            admissible = frozenset(k for k in (_positive_divisors(s) | _positive_divisors(r)) if k > 1)
    else:
        admissible = frozenset(k for k in D if k > 1 and _admissible(k, s, r))

    if (s, r, d) == (0, 0, 0):
        # 𝒟 = {1}
        all_trivial = True
    elif d == 0 and s == 0:
        all_trivial = _is_prime(r + 1)
    elif d == 0 and r == 0:
        all_trivial = _is_prime(s - 1)
    elif D == UNBOUNDED:
        all_trivial = False
    else:
        nontrivial = [k for k in D if k > 1]
        all_trivial = not nontrivial or all(s % k and r % k for k in nontrivial)

    return FamilyReport(
        signature=(s, r, d),
        all_trivial=all_trivial,
        moduli_dimension=s + r + d - 1,
        admissible_orders=admissible,
        divisor_set=D,
        infinity=infinity_type(s, r, d),
    )


# -------------------------
# 汇总分析
# -------------------------


class SymmetryStats:
    """单个向量场的分析结果容器"""

    def __init__(self):
        self.signature: Tuple[int, int, int] = (0, 0, 0)
        self.divisor: Optional[Divisor] = None
        self.barycenters: Optional[Barycenters] = None
        self.isotropy: Optional[IsotropyResult] = None
        self.family: Optional[FamilyReport] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'signature': list(self.signature),
            'divisor': self.divisor.to_dict() if self.divisor else None,
            'barycenters': self.barycenters.to_dict() if self.barycenters else None,
            'isotropy': self.isotropy.to_dict() if self.isotropy else None,
            'family': self.family.to_dict() if self.family else None,
        }


class SymmetryAnalyzer:
    """把除子、重心、迷向群、整族判定汇总成一份报告。"""

    def __init__(self, tol: Optional[Tolerances] = None):
        self.tol = tol or default_tolerances()
        self.field: Optional[VectorField] = None

    def load_field(self, X: VectorField) -> None:
        self.field = X

    def analyze(self) -> SymmetryStats:
        if self.field is None:
            raise ValueError("no field loaded")
        X = self.field
        stats = SymmetryStats()
        stats.signature = X.signature
        stats.divisor = divisor_of(X, self.tol)
        stats.barycenters = barycenters(stats.divisor)
        stats.isotropy = isotropy_group(X, self.tol)
        stats.family = family_report(*X.signature)
        logger.info(f"analyzed {X.describe()}: {stats.isotropy.kind.label}")
        return stats
