"""
对应关系模块 - 向量场 X 与 1-形式、二次微分、平坦度量、分布参数 Ψ 之间的字典

ω_X = (1/λ)·P/Q·e^{−E} dz，满足 ω_X(X) ≡ 1
Ψ_X(z) = ∫^z ω_X（沿给定路径，不做分支修正）
g_X 下的长度 = ∫ |ω_X| |dz|

ω 的极点是 Q 的零点；X 的极点是 ω 的零点，不影响积分。
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from src.config import Tolerances, default_tolerances
from src.errors import NumericFailureError, PathRejectionError, PoleEvaluationError, RangeOverflowError
from src.field_model import VectorField, evaluate_poly, poly_values, roots_of
from src.field_model.schema import as_complex, complex_to_list

logger = logging.getLogger(__name__)

# 梯形法则：起始节点数与加倍上限
_TRAPEZOID_START = 16
_TRAPEZOID_MAX = 1 << 16
_TRAPEZOID_TOL = 1e-10

# 求积失败时，距 ω 的极点在此相对距离内的路径视为穿过极点
_NEAR_POLE = 1e-3


# -------------------------
# 1-形式与二次微分
# -------------------------


def _omega(X: VectorField, z: complex, tol: Tolerances) -> complex:
    ez = evaluate_poly(X.E, z) if X.d else 0j
    if abs(ez.real) > tol.exp_overflow:
        raise RangeOverflowError(f"|Re E(z)| = {abs(ez.real):.4g} exceeds {tol.exp_overflow:g} at z = {z}")
    qz = evaluate_poly(X.Q, z)
    if qz == 0:
        raise PoleEvaluationError(f"z = {z} is a pole of the 1-form")
    return evaluate_poly(X.P, z) / (X.lam * qz) * cmath.exp(-ez)


def one_form(X: VectorField, z: complex, tol: Optional[Tolerances] = None) -> complex:
    """ω_X 的系数 (1/λ)·P(z)/Q(z)·e^{−E(z)}。"""
    tol = tol or default_tolerances()
    z = as_complex(z, 'z')
    if X.s:
        for q in roots_of(X.Q, tol).locations:
            if abs(z - q) <= tol.pole * max(1.0, abs(q)):
                raise PoleEvaluationError(f"z = {z} is a zero of the field (a pole of the 1-form)", {'zero': complex_to_list(q)})
    return _omega(X, z, tol)


def quadratic_differential(X: VectorField, z: complex, tol: Optional[Tolerances] = None) -> complex:
    """ω_X ⊗ ω_X 的系数。"""
    return one_form(X, z, tol) ** 2


def one_form_values(X: VectorField, zs: np.ndarray) -> np.ndarray:
    """向量化的 ω 系数（调用方保证避开 Q 的零点）。"""
    zs = np.asarray(zs, dtype=complex)
    p = poly_values(X.P, zs)
    q = poly_values(X.Q, zs)
    e = poly_values(X.E, zs) if X.d else np.zeros_like(zs)
    return p / (X.lam * q) * np.exp(-e)


def pullback_one_form(Y: VectorField, k: int, C: complex, z: complex, tol: Optional[Tolerances] = None) -> complex:
    """proj^*ω_Y 在 z 处的系数，proj(z) = (z−C)^k；对 Y = proj_*X 应等于 ω_X(z)。"""
    u = as_complex(z, 'z') - C
    return one_form(Y, u ** k, tol) * k * u ** (k - 1)


# -------------------------
# 留数
# -------------------------


@dataclass(frozen=True)
class ResidueEntry:
    location: complex
    residue: complex
    order: int
    radius: float
    # 积分圆上 |ω·ρ| 的最大值，用来判断留数是否可视为 0
    scale: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'location': complex_to_list(self.location),
            'residue': complex_to_list(self.residue),
            'order': self.order,
            'radius': self.radius,
        }


@dataclass(frozen=True)
class ResidueReport:
    entries: Tuple[ResidueEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def residue_at(self, z: complex, tol: float = 1e-9) -> Optional[complex]:
        for e in self.entries:
            if abs(e.location - z) <= tol * max(1.0, abs(z)):
                return e.residue
        return None

    def single_valued(self, rel_tol: float) -> bool:
        return all(abs(e.residue) < rel_tol * max(1.0, e.scale) for e in self.entries)

    def to_dict(self) -> Dict[str, Any]:
        return {'residues': [e.to_dict() for e in self.entries]}


def _contour_residue(X: VectorField, q: complex, radius: float) -> Tuple[complex, float]:
    """(1/2πi)∮ω，圆周 |z − q| = ρ，梯形法则节点加倍直到变化 < 1e−10。"""
    n = _TRAPEZOID_START
    previous = None
    while n <= _TRAPEZOID_MAX:
        t = 2 * math.pi * np.arange(n) / n
        offsets = radius * np.exp(1j * t)
        with np.errstate(over='ignore', invalid='ignore'):
            samples = one_form_values(X, q + offsets) * offsets
        if not np.all(np.isfinite(samples)):
            raise NumericFailureError(f"1-form overflows on the residue contour around {q}", partial=previous)
        value = complex(np.mean(samples))
        scale = float(np.max(np.abs(samples)))
        if previous is not None and abs(value - previous) < _TRAPEZOID_TOL * max(1.0, scale):
            return value, scale
        previous = value
        n *= 2
    raise NumericFailureError(f"residue at {q} did not converge", partial=previous)


def residues(X: VectorField, tol: Optional[Tolerances] = None) -> ResidueReport:
    """ω_X 在 Q 的每个零点处的留数与阶数。"""
    tol = tol or default_tolerances()
    if not X.s:
        return ResidueReport()
    zeros = roots_of(X.Q, tol).roots
    entries = []
    for q, order in zeros:
        others = [abs(q - p) for p, _ in zeros if p != q]
        radius = 0.5 * min(others) if others else 0.5
        radius = min(radius, 0.5)
        value, scale = _contour_residue(X, q, radius)
        entries.append(ResidueEntry(q, value, order, radius, scale))
        logger.debug(f"residue at {q:.6g} (order {order}): {value:.6g}")
    return ResidueReport(tuple(entries))


def is_single_valued(X: VectorField, tol: Optional[Tolerances] = None) -> bool:
    """Ψ_X 单值当且仅当 ω_X 在所有极点处留数为 0。"""
    tol = tol or default_tolerances()
    return residues(X, tol).single_valued(tol.residue)


# -------------------------
# 路径积分
# -------------------------


@dataclass(frozen=True)
class PathSpec:
    vertices: Tuple[complex, ...]
    # 每段的最大长度
    refinement: float = 0.25

    def __post_init__(self):
        vertices = tuple(as_complex(v, 'vertex') for v in self.vertices)
        if len(vertices) < 2:
            raise PathRejectionError("a path needs at least two vertices")
        if not self.refinement > 0:
            raise PathRejectionError("refinement must be positive")
        object.__setattr__(self, 'vertices', vertices)

    @classmethod
    def segment(cls, a: complex, b: complex, refinement: float = 0.25) -> 'PathSpec':
        return cls((a, b), refinement)

    def mapped(self, fn: Callable[[complex], complex]) -> 'PathSpec':
        return PathSpec(tuple(fn(v) for v in self.vertices), self.refinement)

    def pieces(self) -> List[Tuple[complex, complex]]:
        out = []
        for a, b in zip(self.vertices, self.vertices[1:]):
            n = max(1, math.ceil(abs(b - a) / self.refinement))
            for i in range(n):
                out.append((a + (b - a) * i / n, a + (b - a) * (i + 1) / n))
        return out

    def length(self) -> float:
        return sum(abs(b - a) for a, b in zip(self.vertices, self.vertices[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {'vertices': [complex_to_list(v) for v in self.vertices], 'refinement': self.refinement}


def _distance_to_segment(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    t = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def _nearest_pole(poles: Sequence[complex], a: complex, b: complex) -> Optional[Tuple[complex, float]]:
    if not poles:
        return None
    return min(((q, _distance_to_segment(q, a, b)) for q in poles), key=lambda item: item[1])


def _reject(q: complex, distance: float) -> PathRejectionError:
    return PathRejectionError(
        f"path passes through the pole {q} of the 1-form (distance {distance:.3g})",
        {'pole': complex_to_list(q), 'distance': distance},
    )


def _check_path(X: VectorField, path: PathSpec, tol: Tolerances) -> List[complex]:
    """返回 ω 的极点；路径落在某个极点的根定位误差（tol_cluster）以内时拒绝。"""
    if not X.s:
        return []
    poles = list(roots_of(X.Q, tol).locations)
    for a, b in zip(path.vertices, path.vertices[1:]):
        hit = _nearest_pole(poles, a, b)
        if hit is not None and hit[1] <= tol.cluster * max(1.0, abs(hit[0])):
            raise _reject(*hit)
    return poles


def _quad(fn: Callable[[float], float], epsabs: float, tol: Tolerances) -> float:
    """自适应 Gauss–Kronrod（QUADPACK），积分警告视为失败。"""
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(fn, 0.0, 1.0, epsabs=epsabs, epsrel=0.0, limit=tol.quad_limit)
        except integrate.IntegrationWarning as e:
            raise NumericFailureError(f"quadrature did not converge: {e}") from e
    if not math.isfinite(value):
        raise NumericFailureError("quadrature produced a non-finite value")
    return value


def _integrate_path(
    X: VectorField,
    path: PathSpec,
    tol: Tolerances,
    integrand: Callable[[complex, complex], complex],
    real_only: bool,
) -> complex:
    poles = _check_path(X, path, tol)
    total = 0j
    for a, b in path.pieces():
        h = b - a
        if h == 0:
            continue
        epsabs = tol.quad_epsabs * abs(h)

        def value(t: float) -> complex:
            return integrand(a + t * h, h)

        try:
            re = _quad(lambda t: value(t).real, epsabs, tol)
            im = 0.0 if real_only else _quad(lambda t: value(t).imag, epsabs, tol)
        except NumericFailureError:
            # 贴近极点导致的求积失败按路径问题报告
            hit = _nearest_pole(poles, a, b)
            if hit is not None and hit[1] <= _NEAR_POLE * max(1.0, abs(hit[0])):
                raise _reject(*hit)
            raise
        total += complex(re, im)
    return total


def distinguished_parameter(X: VectorField, path: PathSpec, tol: Optional[Tolerances] = None) -> complex:
    """Ψ_X 沿路径的增量 ∫ω_X。"""
    tol = tol or default_tolerances()
    return _integrate_path(X, path, tol, lambda z, h: _omega(X, z, tol) * h, real_only=False)


def flat_length(X: VectorField, path: PathSpec, tol: Optional[Tolerances] = None) -> float:
    """路径在平坦度量 g_X = |ω_X|² 下的长度 ∫|ω_X||dz|。"""
    tol = tol or default_tolerances()
    return _integrate_path(X, path, tol, lambda z, h: abs(_omega(X, z, tol)) * abs(h), real_only=True).real


class PsiSample(NamedTuple):
    z: complex
    psi: complex

    def to_list(self) -> List[List[float]]:
        return [complex_to_list(self.z), complex_to_list(self.psi)]


def psi_graph(
    X: VectorField,
    base: complex,
    points: Sequence[complex],
    tol: Optional[Tolerances] = None,
    refinement: float = 0.25,
) -> List[PsiSample]:
    """(z, Ψ) 采样：Ψ 沿 base → z 的直线段计算；落在 ω 极点上的点跳过。"""
    tol = tol or default_tolerances()
    base = as_complex(base, 'base')
    out = []
    for z in points:
        z = as_complex(z, 'point')
        if z == base:
            out.append(PsiSample(z, 0j))
            continue
        try:
            out.append(PsiSample(z, distinguished_parameter(X, PathSpec((base, z), refinement), tol)))
        except PathRejectionError:
            logger.debug(f"psi_graph: skipping {z}, the segment meets a pole of the 1-form")
    return out
