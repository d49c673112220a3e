"""共享的测试工具：随机场、随机仿射映射、常用例子。"""

from __future__ import annotations

import cmath
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import pytest

from src.field_model import (
    AffineMap,
    Polynomial,
    RootMultiset,
    VectorField,
    emit_field,
    field_from_divisor,
    make_field,
)


def roots(*pairs) -> RootMultiset:
    """roots((0, 2), (1, 1)) 或 roots(1, -1) 都可以。"""
    items = []
    for p in pairs:
        if isinstance(p, tuple):
            items.append((complex(p[0]), p[1]))
        else:
            items.append((complex(p), 1))
    return RootMultiset.from_pairs(items)


def unit_roots(n: int, radius: float = 1.0, phase: float = 0.0) -> list:
    """radius·e^{iphase}·(n 次单位根)。"""
    return [radius * cmath.exp(1j * (phase + 2 * math.pi * l / n)) for l in range(n)]


def field(lam=1, zeros=(), poles=(), exp_roots=(), c0=1) -> VectorField:
    return field_from_divisor(lam, roots(*zeros), roots(*poles), roots(*exp_roots), c0)


def coeff_field(lam, Q: Sequence[complex] = (1,), P: Sequence[complex] = (1,), E: Optional[Sequence[complex]] = None) -> VectorField:
    """由系数（降幂）构造，不带根缓存。"""
    return make_field(
        lam,
        Polynomial.from_coeffs(Q),
        Polynomial.from_coeffs(P),
        Polynomial.from_coeffs(E) if E is not None else None,
    )


def random_complex(rng: np.random.Generator, scale: float = 1.0) -> complex:
    return complex(rng.normal(scale=scale), rng.normal(scale=scale))


def random_poly_coeffs(rng: np.random.Generator, degree: int, scale: float = 1.0) -> list:
    coeffs = [complex(rng.uniform(0.5, 1.5)) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))]
    coeffs += [random_complex(rng, scale) for _ in range(degree)]
    return coeffs


def random_field(
    rng: np.random.Generator,
    max_degree: int = 5,
    exp_scale: float = 0.3,
    signature: Optional[Tuple[int, int, int]] = None,
) -> VectorField:
    """系数随机的场（不带根缓存），签名 ≠ (0, 0, 0)。"""
    while True:
        s, r, d = signature or tuple(int(v) for v in rng.integers(0, max_degree + 1, size=3))
        if (s, r, d) != (0, 0, 0):
            break
    lam = complex(rng.uniform(0.5, 2.0)) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    Q = random_poly_coeffs(rng, s)
    P = random_poly_coeffs(rng, r)
    E = random_poly_coeffs(rng, d, exp_scale) if d else None
    if E is not None:
        E[0] *= exp_scale
    return coeff_field(lam, Q, P, E)


def random_affine(rng: np.random.Generator, a_range=(0.5, 2.0), b_max: float = 3.0) -> AffineMap:
    a = rng.uniform(*a_range) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    b = rng.uniform(0, b_max) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    return AffineMap(a, b)


def random_points(rng: np.random.Generator, n: int, radius: float = 1.0) -> list:
    return [radius * math.sqrt(rng.uniform()) * cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for _ in range(n)]


def rel_err(x: complex, y: complex) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def write_doc(path: Path, doc) -> str:
    path.write_text(json.dumps(doc), encoding='utf-8')
    return str(path)


def field_doc(X: VectorField) -> dict:
    return emit_field(X)


# -------------------------
# 常用例子
# -------------------------


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def z3_example() -> VectorField:
    """−e^{z³}/(3z²) ∂/∂z ∈ E(0,2,3)，ℤ₃ 对称。"""
    return field(-1 / 3, poles=[(0, 2)], exp_roots=[(0, 3)])


@pytest.fixture
def z2_example() -> VectorField:
    """e^{z²}/(z(z²+1)) ∂/∂z ∈ E(0,3,2)，ℤ₂ 对称。"""
    return field(1, poles=[0, 1j, -1j], exp_roots=[(0, 2)])


@pytest.fixture
def e7_example() -> VectorField:
    """z⁴(z³−1) ∂/∂z ∈ E(7,0,0)，ℤ₃ 对称。"""
    return field(1, zeros=[(0, 4)] + unit_roots(3))


def points_on(values: Iterable[complex]) -> list:
    return [complex(v) for v in values]
