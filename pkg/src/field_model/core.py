"""向量场的核心运算（纯函数）。

这里聚合：
- 构造与归一化（make_field / field_from_divisor）
- 求值（evaluate_field / field_values）
- 除子（divisor_of）
- Aut(ℂ) 的拉回作用（pullback）
- 不变量检查（validate）
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional

import numpy as np

from src.config import Tolerances, default_tolerances
from src.errors import (
    EssFieldError,
    InvalidFieldError,
    InvalidInputError,
    PoleEvaluationError,
    RangeOverflowError,
)

from .poly_core import Polynomial, affine_substitute, evaluate_poly, expand_from_roots, find_roots, poly_values
from .schema import AffineMap, Divisor, RootMultiset, VectorField, as_complex

logger = logging.getLogger(__name__)


# -------------------------
# 构造
# -------------------------


def make_field(
    lam: complex,
    Q: Polynomial,
    P: Polynomial,
    E: Optional[Polynomial] = None,
    tol: Optional[Tolerances] = None,
) -> VectorField:
    """把 (λ, Q, P, E) 归一化为 VectorField。

    - Q、P 的首项系数并入 λ（λ·lead(Q)/lead(P)）
    - 非零常数 E 并入 λ（λ·e^{E}），E 变成零多项式
    """
    tol = tol or default_tolerances()
    lam = as_complex(lam, 'lambda')
    if Q.is_zero or P.is_zero:
        raise InvalidInputError("Q and P must be nonzero polynomials")
    E = E if E is not None else Polynomial.zero()

    lam = lam * Q.leading / P.leading
    Q = Q.monic()
    P = P.monic()

    if E.degree == 0 and not E.is_zero:
        c = E.coeffs[0]
        if abs(c.real) > tol.exp_overflow:
            raise RangeOverflowError(f"constant exponent {c} overflows when folded into lambda")
        lam = lam * cmath.exp(c)
        E = Polynomial.zero()
    return VectorField(lam, Q, P, E)


def field_from_divisor(
    lam: complex,
    zeros: RootMultiset,
    poles: RootMultiset,
    exp_roots: RootMultiset,
    c0: complex = 1,
) -> VectorField:
    """由除子 + (λ, c₀) 构造：Q、P 首一，E = c₀∏(z − eᵢ)。"""
    Q = expand_from_roots(1, zeros)
    P = expand_from_roots(1, poles)
    E = expand_from_roots(c0, exp_roots) if exp_roots.total else Polynomial.zero()
    return VectorField(lam, Q, P, E)


# -------------------------
# 求值
# -------------------------


@lru_cache(maxsize=512)
def _roots_cached(p: Polynomial, tol: Tolerances) -> RootMultiset:
    return find_roots(p, tol)


def roots_of(p: Polynomial, tol: Optional[Tolerances] = None) -> RootMultiset:
    if p.roots is not None:
        return p.roots
    return _roots_cached(p, tol or default_tolerances())


def evaluate_field(X: VectorField, z: complex, tol: Optional[Tolerances] = None) -> complex:
    """λ·Q(z)/P(z)·e^{E(z)}。"""
    tol = tol or default_tolerances()
    z = as_complex(z, 'z')
    if X.r:
        for pole in roots_of(X.P, tol).locations:
            if abs(z - pole) <= tol.pole * max(1.0, abs(pole)):
                raise PoleEvaluationError(f"z = {z} is a pole of the field", {'pole': [pole.real, pole.imag]})
    pz = evaluate_poly(X.P, z)
    if pz == 0:
        raise PoleEvaluationError(f"P vanishes at z = {z}")
    ez = evaluate_poly(X.E, z) if X.d else 0j
    if abs(ez.real) > tol.exp_overflow:
        raise RangeOverflowError(f"|Re E(z)| = {abs(ez.real):.4g} exceeds {tol.exp_overflow:g} at z = {z}")
    return X.lam * evaluate_poly(X.Q, z) / pz * cmath.exp(ez)


def field_values(X: VectorField, zs: np.ndarray, exp_clip: float = 700.0) -> np.ndarray:
    """向量化求值；极点或指数溢出处返回 nan（用于绘图与积分）。"""
    zs = np.asarray(zs, dtype=complex)
    q = poly_values(X.Q, zs)
    p = poly_values(X.P, zs)
    e = poly_values(X.E, zs) if X.d else np.zeros_like(zs)
    bad = (p == 0) | (np.abs(e.real) > exp_clip)
    e = np.where(bad, 0, e)
    p = np.where(bad, 1, p)
    out = X.lam * q / p * np.exp(e)
    return np.where(bad, np.nan + 0j, out)


# -------------------------
# 除子
# -------------------------


def divisor_of(X: VectorField, tol: Optional[Tolerances] = None) -> Divisor:
    tol = tol or default_tolerances()
    zeros = roots_of(X.Q, tol)
    poles = roots_of(X.P, tol)
    exp_roots = roots_of(X.E, tol) if X.d else RootMultiset()
    collisions = _collisions(zeros, poles, tol)
    if collisions:
        raise InvalidFieldError(
            "zeros and poles must be disjoint",
            [f"zero-pole-collision at {z}" for z in collisions],
        )
    return Divisor(zeros, poles, exp_roots)


def _collisions(zeros: RootMultiset, poles: RootMultiset, tol: Tolerances) -> List[complex]:
    scale = max(1.0, zeros.scale(), poles.scale())
    return [z for z in zeros.locations if any(abs(z - p) <= tol.cluster * scale for p in poles.locations)]


# -------------------------
# 拉回
# -------------------------


def _pull_poly(p: Polynomial, T: AffineMap) -> Polynomial:
    """p(T(w))：有根缓存时由映射后的根重建，否则直接做仿射代换。"""
    if p.is_zero or p.degree == 0:
        return p
    if p.roots is not None:
        return expand_from_roots(p.leading * T.a ** p.degree, p.roots.map(T.apply_inverse))
    return affine_substitute(p, T)


def pullback(X: VectorField, T: AffineMap) -> VectorField:
    """T*X(w) = X(T(w)) / T′(w)。

    λ ↦ λ·a^{s−r−1}，c₀ ↦ c₀·a^d，除子点 p ↦ (p − b)/a。
    """
    s, r, _ = X.signature
    Q = _pull_poly(X.Q, T).monic()
    P = _pull_poly(X.P, T).monic()
    E = _pull_poly(X.E, T) if X.d else X.E
    lam = X.lam * T.a ** (s - r - 1)
    return VectorField(lam, Q, P, E)


# -------------------------
# 校验
# -------------------------


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code, 'message': self.message}


def validate(X: VectorField, tol: Optional[Tolerances] = None) -> List[Diagnostic]:
    """返回违反 VectorField 不变量的诊断列表（合法时为空）。"""
    tol = tol or default_tolerances()
    out: List[Diagnostic] = []

    if X.lam == 0:
        out.append(Diagnostic('degenerate-lambda', 'lambda must be nonzero'))
    if X.Q.is_zero or abs(X.Q.leading - 1) > 1e-12:
        out.append(Diagnostic('non-monic-q', f'Q must be monic, leading = {X.Q.leading}'))
    if X.P.is_zero or abs(X.P.leading - 1) > 1e-12:
        out.append(Diagnostic('non-monic-p', f'P must be monic, leading = {X.P.leading}'))
    if not X.E.is_zero and X.E.degree == 0:
        out.append(Diagnostic('constant-exponent', 'a constant E must be folded into lambda'))
    if out:
        return out

    try:
        zeros = roots_of(X.Q, tol)
        poles = roots_of(X.P, tol)
    except EssFieldError as e:
        out.append(Diagnostic('root-failure', str(e)))
        return out
    for z in _collisions(zeros, poles, tol):
        out.append(Diagnostic('zero-pole-collision', f'Q and P share the root {z}'))
    return out


def require_valid(X: VectorField, tol: Optional[Tolerances] = None) -> None:
    problems = validate(X, tol)
    if problems:
        raise InvalidFieldError('invalid vector field', problems)


def fields_close(X: VectorField, Y: VectorField, rel_tol: float = 1e-9) -> bool:
    """签名一致，λ 与 Q、P、E 的系数在相对容差内逐项一致。"""
    if X.signature != Y.signature:
        return False
    if abs(X.lam - Y.lam) > rel_tol * max(1.0, abs(X.lam)):
        return False
    if X.d and not X.E.close_to(Y.E, rel_tol):
        return False
    if not X.Q.close_to(Y.Q, rel_tol) or not X.P.close_to(Y.P, rel_tol):
        return False
    return True
