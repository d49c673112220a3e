"""复多项式运算与根/系数对偶（Viète 映射）。

- 系数按降幂保存（首项在前）；零多项式写作 (0,)
- ``find_roots``：Aberth–Ehrlich 同时迭代 + 重根聚类
- 由根构造的多项式会缓存根多重集，``find_roots`` 直接返回缓存，重数保持精确
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config import Tolerances, default_tolerances
from src.errors import InvalidInputError, NumericFailureError

from .schema import AffineMap, RootMultiset, as_complex, complex_sort_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Polynomial:
    coeffs: Tuple[complex, ...]
    roots: Optional[RootMultiset] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise InvalidInputError("polynomial needs at least one coefficient (use (0,) for zero)")
        coeffs = tuple(as_complex(c, 'coefficient') for c in self.coeffs)
        if len(coeffs) > 1 and coeffs[0] == 0:
            raise InvalidInputError("leading coefficient must be nonzero")
        object.__setattr__(self, 'coeffs', coeffs)
        if self.roots is not None and self.roots.total != len(coeffs) - 1:
            raise InvalidInputError("cached roots do not match the polynomial degree")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex]) -> 'Polynomial':
        """去掉前导零后构造。"""
        values = [complex(c) for c in coeffs]
        while len(values) > 1 and values[0] == 0:
            values.pop(0)
        return cls(tuple(values or [0j]))

    @classmethod
    def constant(cls, c: complex) -> 'Polynomial':
        return cls((complex(c),), RootMultiset() if c != 0 else None)

    @classmethod
    def zero(cls) -> 'Polynomial':
        return cls((0j,))

    @classmethod
    def monomial(cls, degree: int, c: complex = 1) -> 'Polynomial':
        return expand_from_roots(c, RootMultiset(((0j, degree),)) if degree else RootMultiset())

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[0]

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def coefficient_scale(self) -> float:
        return float(np.sum(np.abs(self.as_array())))

    def scaled(self, c: complex) -> 'Polynomial':
        """c·p；根缓存保持不变。"""
        if c == 0:
            return Polynomial.zero()
        return Polynomial(tuple(c * a for a in self.coeffs), self.roots)

    def monic(self) -> 'Polynomial':
        if self.is_zero:
            raise InvalidInputError("zero polynomial cannot be made monic")
        return self.scaled(1 / self.leading)

    def __call__(self, z: complex) -> complex:
        return evaluate_poly(self, z)

    def __mul__(self, other: 'Polynomial') -> 'Polynomial':
        return poly_mul(self, other)

    def derivative(self) -> 'Polynomial':
        return Polynomial.from_coeffs(np.polyder(self.as_array()) if self.degree else [0j])

    def close_to(self, other: 'Polynomial', rel_tol: float) -> bool:
        """逐系数比较（按较大系数尺度的相对误差）。"""
        if self.degree != other.degree:
            return False
        a, b = self.as_array(), other.as_array()
        scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
        return bool(np.all(np.abs(a - b) <= rel_tol * scale))


def expand_from_roots(leading: complex, roots: RootMultiset) -> Polynomial:
    """Viète 映射：leading·∏(z − rᵢ)^{mᵢ}。按 (|r|, arg r) 顺序累乘，结果确定。"""
    leading = as_complex(leading, 'leading')
    if leading == 0:
        raise InvalidInputError("expand_from_roots requires a nonzero leading coefficient")
    ordered = sorted(roots.points(), key=lambda z: (abs(z), math.atan2(z.imag, z.real)))
    coeffs = np.array([1.0 + 0j])
    for z in ordered:
        coeffs = np.convolve(coeffs, np.array([1.0 + 0j, -z]))
    return Polynomial(tuple(leading * coeffs), roots)


def evaluate_poly(p: Polynomial, z: complex) -> complex:
    """有根缓存时按乘积 leading·∏(z − rᵢ)^{mᵢ} 求值（高重根附近相对误差小），否则 Horner。"""
    z = complex(z)
    if p.roots is not None and p.degree >= 1:
        acc = p.leading
        for r, m in p.roots.roots:
            acc *= (z - r) ** m
        return acc
    acc = 0j
    for c in p.coeffs:
        acc = acc * z + c
    return acc


def poly_values(p: Polynomial, zs: np.ndarray) -> np.ndarray:
    """evaluate_poly 的向量化版本。"""
    zs = np.asarray(zs, dtype=complex)
    if p.roots is None or p.degree < 1:
        return np.polyval(p.as_array(), zs)
    out = np.full(zs.shape, p.leading, dtype=complex)
    for r, m in p.roots.roots:
        out *= (zs - r) ** m
    return out


def _shift_coeffs(coeffs: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """返回 p(a·w + b) 的降幂系数（Horner 展开成多项式）。"""
    linear = np.array([a, b], dtype=complex)
    out = np.array([coeffs[0]], dtype=complex)
    for c in coeffs[1:]:
        out = np.convolve(out, linear)
        out[-1] += c
    return out


def affine_substitute(p: Polynomial, T: AffineMap) -> Polynomial:
    """result(w) = p(a·w + b)。首项乘以 a^deg；若有根缓存则根映到 T⁻¹(root)。"""
    if p.degree == 0:
        return p
    coeffs = _shift_coeffs(p.as_array(), T.a, T.b)
    roots = p.roots.map(T.apply_inverse) if p.roots is not None else None
    return Polynomial(tuple(coeffs), roots)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero or q.is_zero:
        return Polynomial.zero()
    coeffs = np.convolve(p.as_array(), q.as_array())
    roots = None
    if p.roots is not None and q.roots is not None:
        roots = RootMultiset(p.roots.roots + q.roots.roots)
        roots = RootMultiset.from_pairs(roots.roots)
    return Polynomial(tuple(coeffs), roots)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    n = max(len(p.coeffs), len(q.coeffs))
    a = np.zeros(n, dtype=complex)
    a[n - len(p.coeffs):] += p.as_array()
    a[n - len(q.coeffs):] += q.as_array()
    return Polynomial.from_coeffs(a)


# -------------------------
# 求根
# -------------------------


def _backward_scale(abs_coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Σ|a_j||z|^j，用作求根的向后误差尺度。"""
    return np.polyval(abs_coeffs, np.abs(z))


def _aberth(coeffs: np.ndarray, tol: Tolerances) -> np.ndarray:
    n = len(coeffs) - 1
    deriv = np.polyder(coeffs)
    abs_coeffs = np.abs(coeffs)

    # Cauchy 上界给出初始圆半径
    radius = 1.0 + float(np.max(np.abs(coeffs[1:] / coeffs[0])))
    radius = min(radius, 1e12)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    x = radius * 0.5 * np.exp(1j * angles)

    converged = np.zeros(n, dtype=bool)
    for it in range(tol.max_iter):
        for i in range(n):
            if converged[i]:
                continue
            xi = x[i]
            pv = np.polyval(coeffs, xi)
            if abs(pv) <= tol.root * _backward_scale(abs_coeffs, np.array([xi]))[0]:
                converged[i] = True
                continue
            dv = np.polyval(deriv, xi)
            diff = xi - np.delete(x, i)
            if np.any(diff == 0):
                x[i] = xi + 1e-8 * max(1.0, abs(xi)) * (1 + 1j)
                continue
            ratio = pv / dv if dv != 0 else pv
            denom = 1.0 - ratio * np.sum(1.0 / diff)
            delta = ratio / denom if denom != 0 else ratio
            x[i] = xi - delta
        if converged.all():
            logger.debug(f"Aberth converged after {it + 1} iterations (degree {n})")
            return x
    pending = int(np.count_nonzero(~converged))
    raise NumericFailureError(
        f"root finding did not converge after {tol.max_iter} iterations ({pending} of {n} roots pending)",
        partial=[complex(v) for v in x],
        details={'degree': n, 'pending': pending},
    )


def _refine_multiple(coeffs: np.ndarray, c: complex, m: int, limit: float) -> complex:
    """对 p^{(m−1)} 做 Newton，把重根中心精修到一个单根。"""
    q = coeffs
    for _ in range(m - 1):
        q = np.polyder(q)
    dq = np.polyder(q) if len(q) > 1 else np.array([0j])
    start = c
    for _ in range(50):
        fv = np.polyval(q, c)
        dv = np.polyval(dq, c)
        if dv == 0:
            break
        step = fv / dv
        c = c - step
        if abs(c - start) > limit:
            return start
        if abs(step) <= 1e-16 * max(1.0, abs(c)):
            break
    return complex(c)


def _is_multiple_root(coeffs: np.ndarray, c: complex, m: int) -> bool:
    """平移后 Taylor 系数 t_0..t_{m−1} 都可忽略时，c 视为 m 重根。"""
    shifted = _shift_coeffs(coeffs, 1.0, c)
    bound = _shift_coeffs(np.abs(coeffs).astype(complex), 1.0, abs(c))
    for j in range(m):
        if abs(shifted[-1 - j]) > 1e-10 * max(abs(bound[-1 - j]), 1e-300):
            return False
    return True


def _cluster(coeffs: np.ndarray, approx: np.ndarray) -> List[Tuple[complex, int]]:
    scale = max(1.0, float(np.max(np.abs(approx)))) if len(approx) else 1.0
    coarse = 0.05 * scale
    remaining = sorted(range(len(approx)), key=lambda i: complex_sort_key(complex(approx[i])))
    out: List[Tuple[complex, int]] = []
    while remaining:
        i = remaining[0]
        zi = complex(approx[i])
        near = sorted(
            (j for j in remaining if abs(approx[j] - zi) <= coarse),
            key=lambda j: abs(approx[j] - zi),
        )
        accepted = ([i], zi)
        for m in range(len(near), 1, -1):
            group = near[:m]
            centroid = complex(np.mean(approx[group]))
            center = _refine_multiple(coeffs, centroid, m, coarse)
            if _is_multiple_root(coeffs, center, m):
                accepted = (group, center)
                break
        group, center = accepted
        out.append((center, len(group)))
        remaining = [j for j in remaining if j not in group]
    return out


def _merge_close(pairs: Sequence[Tuple[complex, int]], radius: float) -> List[Tuple[complex, int]]:
    merged: List[List] = []
    for z, m in sorted(pairs, key=lambda item: complex_sort_key(item[0])):
        for entry in merged:
            if abs(entry[0] - z) <= radius:
                total = entry[1] + m
                entry[0] = (entry[0] * entry[1] + z * m) / total
                entry[1] = total
                break
        else:
            merged.append([z, m])
    return [(complex(z), int(m)) for z, m in merged]


def find_roots(p: Polynomial, tol: Optional[Tolerances] = None) -> RootMultiset:
    """p 的根多重集，按 (Re, Im) 排序。"""
    if p.is_zero:
        raise InvalidInputError("the zero polynomial has no root multiset")
    if p.roots is not None:
        return p.roots
    if p.degree == 0:
        return RootMultiset()
    tol = tol or default_tolerances()

    coeffs = p.as_array()
    # 末尾精确为 0 的系数对应 z = 0 处的根
    zero_mult = 0
    while zero_mult < p.degree and coeffs[len(coeffs) - 1 - zero_mult] == 0:
        zero_mult += 1
    core = coeffs[: len(coeffs) - zero_mult]

    pairs: List[Tuple[complex, int]] = []
    if len(core) > 1:
        approx = _aberth(core, tol)
        pairs = _cluster(core, approx)
    if zero_mult:
        pairs.append((0j, zero_mult))

    max_abs = max((abs(z) for z, _ in pairs), default=0.0)
    # 距离小于 tol_cluster 的再合并
    pairs = _merge_close(pairs, tol.cluster * max(1.0, max_abs))
    result = RootMultiset(tuple(pairs))
    logger.debug(f"find_roots: degree {p.degree} -> {len(result.roots)} distinct roots")
    return result
