"""
对称实现模块 - 由组合数据（阶 k、中心、轨道、重数）构造 ℤ_k 对称的向量场

每条轨道由 (半径 ρ, 角度 θ, 重数 m) 给出，对应 k 个点 C + ρe^{iθ}e^{i2πℓ/k}。
中心 C 是极点（k | ν+1，k ∤ ν）或零点（k | ν−1，k ∤ ν）；指数部分在 C 处的重数 μ 需满足 k | μ。
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import Tolerances, default_tolerances
from src.errors import ParseError, SpecRejectionError
from src.field_model import RootMultiset, VectorField, field_from_divisor
from src.field_model.enums import CenterKind
from src.field_model.loader import parse_complex
from src.field_model.schema import complex_to_list

logger = logging.getLogger(__name__)

# 轨道点重合判定
_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class Orbit:
    radius: float
    angle: float
    multiplicity: int = 1

    def points(self, center: complex, k: int) -> List[complex]:
        base = self.radius * cmath.exp(1j * self.angle)
        return [center + base * cmath.exp(2j * math.pi * l / k) for l in range(1, k + 1)]

    def to_list(self) -> List[Any]:
        return [self.radius, self.angle, self.multiplicity]


@dataclass(frozen=True)
class SymmetrySpec:
    k: int
    center_kind: CenterKind
    center_multiplicity: int
    C: complex = 0j
    zero_orbits: Tuple[Orbit, ...] = ()
    pole_orbits: Tuple[Orbit, ...] = ()
    exp_orbits: Tuple[Orbit, ...] = ()
    exp_center_multiplicity: int = 0
    lam: complex = 1 + 0j
    c0: complex = 1 + 0j

    def signature(self) -> Tuple[int, int, int]:
        k, nu = self.k, self.center_multiplicity
        s = k * sum(o.multiplicity for o in self.zero_orbits)
        r = k * sum(o.multiplicity for o in self.pole_orbits)
        if self.center_kind == CenterKind.ZERO:
            s += nu
        else:
            r += nu
        d = k * sum(o.multiplicity for o in self.exp_orbits) + self.exp_center_multiplicity
        return (s, r, d)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'C': complex_to_list(self.C),
            'center': {'kind': self.center_kind.label, 'multiplicity': self.center_multiplicity},
            'zero_orbits': [o.to_list() for o in self.zero_orbits],
            'pole_orbits': [o.to_list() for o in self.pole_orbits],
            'exp_orbits': [o.to_list() for o in self.exp_orbits],
            'exp_center_multiplicity': self.exp_center_multiplicity,
            'lambda': complex_to_list(self.lam),
            'c0': complex_to_list(self.c0),
        }


def spec_problems(spec: SymmetrySpec) -> List[str]:
    """列出 SymmetrySpec 违反的约束（空列表表示合法）。"""
    problems: List[str] = []
    k, nu, mu = spec.k, spec.center_multiplicity, spec.exp_center_multiplicity
    if k < 2:
        return [f"order k must be >= 2 (got {k})"]
    if nu < 1:
        problems.append(f"center multiplicity must be >= 1 (got {nu})")
    elif spec.center_kind == CenterKind.POLE:
        if (nu + 1) % k:
            problems.append(f"pole center requires k | (nu+1): {k} does not divide {nu + 1}")
        if nu % k == 0:
            problems.append(f"pole center requires k not dividing nu: {k} divides {nu}")
    else:
        if (nu - 1) % k:
            problems.append(f"zero center requires k | (nu-1): {k} does not divide {nu - 1}")
        if nu % k == 0:
            problems.append(f"zero center requires k not dividing nu: {k} divides {nu}")
    if mu < 0:
        problems.append(f"exp center multiplicity must be >= 0 (got {mu})")
    elif mu % k:
        problems.append(f"exp center multiplicity requires k | mu: {k} does not divide {mu}")
    for name, orbits in (('zero', spec.zero_orbits), ('pole', spec.pole_orbits), ('exp', spec.exp_orbits)):
        for i, o in enumerate(orbits):
            if not o.radius > 0:
                problems.append(f"{name} orbit {i}: radius must be positive")
            if o.multiplicity < 1:
                problems.append(f"{name} orbit {i}: multiplicity must be >= 1")
    if spec.lam == 0:
        problems.append("lambda must be nonzero")

    s, r, d = spec.signature()
    if d and spec.c0 == 0:
        problems.append("c0 must be nonzero when d >= 1")
    if d % k:
        problems.append(f"k must divide d: {k} does not divide {d}")
    if (s - r - 1) % k:
        problems.append(f"k must divide s-r-1: {k} does not divide {s - r - 1}")
    return problems


def _divisor_parts(spec: SymmetrySpec) -> Tuple[RootMultiset, RootMultiset, RootMultiset]:
    k, C = spec.k, spec.C

    def assemble(orbits: Sequence[Orbit], center_mult: int) -> RootMultiset:
        pairs: List[Tuple[complex, int]] = []
        if center_mult:
            pairs.append((C, center_mult))
        for o in orbits:
            pairs.extend((p, o.multiplicity) for p in o.points(C, k))
        return RootMultiset.from_pairs(pairs, merge_tol=_MERGE_TOL)

    nu = spec.center_multiplicity
    zeros = assemble(spec.zero_orbits, nu if spec.center_kind == CenterKind.ZERO else 0)
    poles = assemble(spec.pole_orbits, nu if spec.center_kind == CenterKind.POLE else 0)
    exps = assemble(spec.exp_orbits, spec.exp_center_multiplicity)
    return zeros, poles, exps


def realize_symmetric(spec: SymmetrySpec, tol: Optional[Tolerances] = None) -> VectorField:
    """构造除子为 {C（中心重数）} ∪ 各轨道的场；λ、c₀ 按给定值。"""
    tol = tol or default_tolerances()
    problems = spec_problems(spec)
    if problems:
        raise SpecRejectionError(problems[0], {'violations': problems})

    zeros, poles, exps = _divisor_parts(spec)
    radius = tol.cluster * max(1.0, zeros.scale(), poles.scale())
    clash = [z for z in zeros.locations if any(abs(z - p) <= radius for p in poles.locations)]
    if clash:
        raise SpecRejectionError(
            "zero and pole orbits must be disjoint",
            {'violations': [f"zero-pole-collision at {z}" for z in clash]},
        )
    X = field_from_divisor(spec.lam, zeros, poles, exps, spec.c0)
    logger.info(f"realized {X.describe()} with k={spec.k}")
    return X


def realize_simple(spec: SymmetrySpec, tol: Optional[Tolerances] = None) -> VectorField:
    """简单族 E(s,r,d)^S：有限零点与极点全部是单重的。"""
    problems: List[str] = []
    if spec.center_multiplicity != 1:
        problems.append(f"simple fields need a simple center (nu = 1, got {spec.center_multiplicity})")
    if spec.center_kind == CenterKind.POLE and spec.k != 2:
        problems.append(f"a simple pole center forces k = 2: {spec.k} does not divide 2")
    for name, orbits in (('zero', spec.zero_orbits), ('pole', spec.pole_orbits)):
        for i, o in enumerate(orbits):
            if o.multiplicity != 1:
                problems.append(f"{name} orbit {i} has multiplicity {o.multiplicity} > 1")
    if problems:
        raise SpecRejectionError(problems[0], {'violations': problems})

    X = realize_symmetric(spec, tol)
    zeros, poles, _ = _divisor_parts(spec)
    repeated = [z for z, m in zeros.roots + poles.roots if m > 1]
    if repeated:
        raise SpecRejectionError(
            "orbits overlap, producing a multiple zero or pole",
            {'violations': [f"multiple point at {z}" for z in repeated]},
        )
    return X


# -------------------------
# 文档解析与随机样本
# -------------------------


def _parse_orbits(items: Any, location: str) -> Tuple[Orbit, ...]:
    if items is None:
        return ()
    if not isinstance(items, list):
        raise ParseError("orbits must be a list of [radius, angle, multiplicity]", location)
    out = []
    for i, item in enumerate(items):
        loc = f"{location}[{i}]"
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise ParseError("expected [radius, angle] or [radius, angle, multiplicity]", loc)
        radius, angle = item[0], item[1]
        mult = item[2] if len(item) == 3 else 1
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in (radius, angle)):
            raise ParseError("radius and angle must be numbers", loc)
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ParseError("multiplicity must be an integer", loc)
        out.append(Orbit(float(radius), float(angle), mult))
    return tuple(out)


def parse_spec(doc: Any) -> SymmetrySpec:
    """SymmetrySpec 文档：
    {"k": 3, "C": [0,0], "center": {"kind": "pole", "multiplicity": 2},
     "zero_orbits": [[ρ, θ, m], ...], "pole_orbits": [...], "exp_orbits": [...],
     "exp_center_multiplicity": 3, "lambda": [re, im], "c0": [re, im]}
    """
    if not isinstance(doc, dict):
        raise ParseError("symmetry spec must be an object", '$')
    k = doc.get('k')
    if isinstance(k, bool) or not isinstance(k, int):
        raise ParseError("'k' must be an integer", '$.k')
    center = doc.get('center')
    if not isinstance(center, dict) or 'kind' not in center:
        raise ParseError("'center' must be an object with 'kind' and 'multiplicity'", '$.center')
    try:
        kind = CenterKind.from_label(center['kind'])
    except ValueError as e:
        raise ParseError(str(e), '$.center.kind') from e
    nu = center.get('multiplicity', 1)
    if isinstance(nu, bool) or not isinstance(nu, int):
        raise ParseError("center multiplicity must be an integer", '$.center.multiplicity')
    mu = doc.get('exp_center_multiplicity', 0)
    if isinstance(mu, bool) or not isinstance(mu, int):
        raise ParseError("exp_center_multiplicity must be an integer", '$.exp_center_multiplicity')
    return SymmetrySpec(
        k=k,
        center_kind=kind,
        center_multiplicity=nu,
        C=parse_complex(doc.get('C', [0, 0]), '$.C'),
        zero_orbits=_parse_orbits(doc.get('zero_orbits'), '$.zero_orbits'),
        pole_orbits=_parse_orbits(doc.get('pole_orbits'), '$.pole_orbits'),
        exp_orbits=_parse_orbits(doc.get('exp_orbits'), '$.exp_orbits'),
        exp_center_multiplicity=mu,
        lam=parse_complex(doc.get('lambda', [1, 0]), '$.lambda'),
        c0=parse_complex(doc.get('c0', [1, 0]), '$.c0'),
    )


def sample_spec(rng: np.random.Generator, k: Optional[int] = None, max_degree: int = 24) -> SymmetrySpec:
    """随机生成一个合法的 SymmetrySpec（测试用，不保证覆盖全部分拆）。"""
    k = int(k if k is not None else rng.integers(2, 7))
    while True:
        kind = CenterKind.POLE if rng.random() < 0.5 else CenterKind.ZERO
        t = int(rng.integers(1, 3))
        nu = k * t - 1 if kind == CenterKind.POLE else k * (t - 1) + 1
        mu = k * int(rng.integers(0, 3))

        # 零点与极点轨道用互不相同的半径，避免碰撞
        radii = iter(rng.permutation(np.linspace(0.4, 2.0, 9)))

        def orbits(count: int, exponent: bool = False) -> Tuple[Orbit, ...]:
            out = []
            for _ in range(count):
                angle = float(rng.uniform(0, 2 * math.pi / k))
                if exponent:
                    # 指数根：半径 ≤ 1，单重
                    out.append(Orbit(float(rng.uniform(0.3, 1.0)), angle, 1))
                else:
                    out.append(Orbit(float(next(radii)), angle, int(rng.integers(1, 3))))
            return tuple(out)

        spec = SymmetrySpec(
            k=k,
            center_kind=kind,
            center_multiplicity=nu,
            C=complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            zero_orbits=orbits(int(rng.integers(0, 3))),
            pole_orbits=orbits(int(rng.integers(0, 3))),
            exp_orbits=orbits(int(rng.integers(0, 2)), exponent=True),
            exp_center_multiplicity=mu,
            lam=complex(rng.uniform(0.5, 2.0), rng.uniform(-1, 1)),
            c0=cmath.exp(1j * rng.uniform(0, 2 * math.pi)) * rng.uniform(0.5, 1.0),
        )
        if sum(spec.signature()) <= max_degree and not spec_problems(spec):
            return spec
