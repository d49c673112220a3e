"""
商向量场模块 - 在 w = (z−C)^k 坐标下计算 Y = proj_*X

Y(w) = k(z−C)^{k−1}·X(z)，逐轨道构造：
- 代表元为 ρe^{iθ} 的轨道 ↦ w = (ρe^{iθ})^k 处的单个根，重数不变
- 中心处：(z−C)^{k−1+ν_Q−ν_P} = w^n，n = (k−1+ν_Q−ν_P)/k
- Ê(w) = c₀·w^{μ/k}·∏(w − ê_j)，λ̂ = k·λ

全程不取 w^{1/k}，没有分支切割。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from src.config import Tolerances, default_tolerances
from src.errors import InvalidGermError, NoSymmetryError, NotSymmetricError
from src.field_model import (
    AffineMap,
    Divisor,
    RootMultiset,
    VectorField,
    divisor_of,
    emit_field,
    evaluate_field,
    field_from_divisor,
)
from src.field_model.enums import GermKind, IsotropyKind
from src.field_model.schema import complex_to_list
from src.symmetry_analyzer import isotropy_group, rotation_invariant

logger = logging.getLogger(__name__)

Orbits = Tuple[Tuple[complex, int], ...]


# -------------------------
# 轨道分解
# -------------------------


@dataclass(frozen=True)
class OrbitDecomposition:
    center: complex
    k: int
    center_mult_Q: int
    center_mult_P: int
    center_mult_E: int
    zero_orbits: Orbits = ()
    pole_orbits: Orbits = ()
    exp_orbits: Orbits = ()

    def reassemble(self) -> Divisor:
        """每条轨道复制 k 份，再加上中心重数。"""
        T = AffineMap.rotation(self.k, self.center)

        def part(orbits: Orbits, center_mult: int) -> RootMultiset:
            pairs: List[Tuple[complex, int]] = [(self.center, center_mult)] if center_mult else []
            for rep, mult in orbits:
                p = rep
                for _ in range(self.k):
                    pairs.append((p, mult))
                    p = T(p)
            return RootMultiset(tuple(pairs))

        return Divisor(
            part(self.zero_orbits, self.center_mult_Q),
            part(self.pole_orbits, self.center_mult_P),
            part(self.exp_orbits, self.center_mult_E),
        )

    def to_dict(self) -> Dict[str, Any]:
        def fmt(orbits: Orbits):
            return [[complex_to_list(p), m] for p, m in orbits]

        return {
            'center': complex_to_list(self.center),
            'k': self.k,
            'center_mult_Q': self.center_mult_Q,
            'center_mult_P': self.center_mult_P,
            'center_mult_E': self.center_mult_E,
            'zero_orbits': fmt(self.zero_orbits),
            'pole_orbits': fmt(self.pole_orbits),
            'exp_orbits': fmt(self.exp_orbits),
        }


def _arg(w: complex, radius: float = 0.0) -> float:
    """arg ∈ [0, 2π)；正实轴附近 |Im w| ≤ radius 的点记为 0。"""
    if w.real > 0 and abs(w.imag) <= radius:
        return 0.0
    theta = math.atan2(w.imag, w.real)
    return theta + 2 * math.pi if theta < 0 else theta


def _split_orbits(m: RootMultiset, C: complex, k: int, radius: float) -> Tuple[int, Orbits]:
    center_mult = m.multiplicity_at(C, radius)
    rest = [(p, mult) for p, mult in m.roots if abs(p - C) > radius]
    rest.sort(key=lambda item: _arg(item[0] - C, radius))
    used = [False] * len(rest)
    T = AffineMap.rotation(k, C)
    orbits: List[Tuple[complex, int]] = []

    for i, (p, mult) in enumerate(rest):
        if used[i]:
            continue
        members = []
        q = p
        for _ in range(k):
            best, best_dist = -1, math.inf
            for j, (cand, cand_mult) in enumerate(rest):
                if used[j] or cand_mult != mult:
                    continue
                dist = abs(cand - q)
                if dist < best_dist:
                    best, best_dist = j, dist
            if best < 0 or best_dist > radius:
                raise NotSymmetricError(
                    f"point {p} has no complete orbit of order {k} about {C}",
                    {'point': complex_to_list(p), 'k': k},
                )
            used[best] = True
            members.append(rest[best][0])
            q = T(q)
        rep = min(members, key=lambda z: _arg(z - C, radius))
        orbits.append((rep, mult))
    return center_mult, tuple(orbits)


def orbit_decomposition(div: Divisor, C: complex, k: int, tol: Optional[Tolerances] = None) -> OrbitDecomposition:
    tol = tol or default_tolerances()
    if k < 1:
        raise NotSymmetricError(f"rotation order must be positive (got {k})")
    radius = tol.symmetry * max(1.0, div.scale())
    if k >= 2:
        for name, part in zip(('zeros', 'poles', 'exp_roots'), div.parts()):
            if not rotation_invariant(part, C, k, radius):
                raise NotSymmetricError(
                    f"{name} are not invariant under the rotation of order {k} about {C}",
                    {'part': name, 'k': k, 'center': complex_to_list(C)},
                )
    nu_q, zero_orbits = _split_orbits(div.zeros, C, k, radius)
    nu_p, pole_orbits = _split_orbits(div.poles, C, k, radius)
    mu, exp_orbits = _split_orbits(div.exp_roots, C, k, radius)
    return OrbitDecomposition(C, k, nu_q, nu_p, mu, zero_orbits, pole_orbits, exp_orbits)


# -------------------------
# 商向量场
# -------------------------


class QuotientResult(NamedTuple):
    field: VectorField
    k: int
    center: complex

    def to_dict(self) -> Dict[str, Any]:
        return {'field': emit_field(self.field), 'k': self.k, 'center': complex_to_list(self.center)}


def quotient_signature(s: int, r: int, d: int, k: int, center_is_pole: bool) -> Tuple[int, int, int]:
    """商场的签名 (s′, r′, d′)。"""
    if center_is_pole:
        return (s // k, (r + 1) // k - 1, d // k)
    return ((s - 1) // k + 1, r // k, d // k)


def _resolve_order(X: VectorField, k: Optional[int], tol: Tolerances) -> Tuple[int, complex]:
    iso = isotropy_group(X, tol)
    if iso.kind == IsotropyKind.TRIVIAL:
        raise NoSymmetryError("the isotropy group is trivial, there is nothing to quotient by", {'signature': list(X.signature)})
    if iso.kind == IsotropyKind.CONTINUOUS:
        if k is None:
            raise NoSymmetryError("the isotropy group is continuous, an explicit order k is required")
        if k < 2:
            raise NotSymmetricError(f"quotient order must be >= 2 (got {k})")
        return k, iso.center
    if k is None:
        return iso.k, iso.center
    if k < 2 or iso.k % k:
        raise NotSymmetricError(f"order {k} does not divide the detected order {iso.k}", {'detected': iso.k, 'k': k})
    return k, iso.center


def quotient_field(X: VectorField, k: Optional[int] = None, tol: Optional[Tolerances] = None) -> QuotientResult:
    """Y = proj_*X；k 缺省时取检测到的阶数。"""
    tol = tol or default_tolerances()
    k, C = _resolve_order(X, k, tol)
    orbits = orbit_decomposition(divisor_of(X, tol), C, k, tol)

    n = k - 1 + orbits.center_mult_Q - orbits.center_mult_P
    if n % k or orbits.center_mult_E % k:
        raise NotSymmetricError(
            f"the germ at the center is not invariant under the rotation of order {k}",
            {'center_exponent': n, 'exp_center_multiplicity': orbits.center_mult_E},
        )
    n //= k

    def image(items: Orbits, center_mult: int) -> RootMultiset:
        pairs = [((rep - C) ** k, mult) for rep, mult in items]
        if center_mult > 0:
            pairs.append((0j, center_mult))
        return RootMultiset(tuple(pairs))

    zeros = image(orbits.zero_orbits, max(n, 0))
    poles = image(orbits.pole_orbits, max(-n, 0))
    exps = image(orbits.exp_orbits, orbits.center_mult_E // k)
    Y = field_from_divisor(k * X.lam, zeros, poles, exps, X.c0)
    logger.info(f"quotient of {X.describe()} by Z_{k} about {C}: {Y.describe()}")
    return QuotientResult(Y, k, C)


def pushforward_value(X: VectorField, k: int, C: complex, z: complex, tol: Optional[Tolerances] = None) -> complex:
    """k(z−C)^{k−1}·X(z)，即 Y 在 w = (z−C)^k 处的值。"""
    return k * (z - C) ** (k - 1) * evaluate_field(X, z, tol)


# -------------------------
# 芽的商（标准形表）
# -------------------------


@dataclass(frozen=True)
class GermSpec:
    """原点处的标准芽。

    - pole(ν)：1/z^ν ∂/∂z（ν = 0 为正则点）
    - linear(λ)：λz ∂/∂z
    - zero(ν)：z^ν ∂/∂z，ν ≥ 2
    - zero_with_residue(ν, λ)：z^ν/(1 + λz^{ν−1}) ∂/∂z，ν ≥ 3，λ ≠ 0
    - exp(d)：e^{z^d} ∂/∂z（∞ 处的芽）
    """

    kind: GermKind
    order: int = 1
    lam: complex = 1 + 0j

    def __post_init__(self):
        problems = germ_problems(self)
        if problems:
            raise InvalidGermError(problems[0], {'germ': self.describe()})

    def residue(self) -> complex:
        if self.kind == GermKind.LINEAR:
            return 1 / self.lam
        if self.kind == GermKind.ZERO_WITH_RESIDUE:
            return self.lam
        return 0j

    def one_form_order(self) -> Optional[int]:
        """ω 在 0 处的阶（零点为正，极点为负）；exp 芽为本性奇点，返回 None。"""
        if self.kind == GermKind.POLE:
            return self.order
        if self.kind == GermKind.LINEAR:
            return -1
        if self.kind in (GermKind.ZERO, GermKind.ZERO_WITH_RESIDUE):
            return -self.order
        return None

    def quadratic_order(self) -> Optional[int]:
        order = self.one_form_order()
        return None if order is None else 2 * order

    def describe(self) -> str:
        kind = self.kind
        if kind == GermKind.POLE:
            return f"1/w^{self.order} d/dw" if self.order else "d/dw"
        if kind == GermKind.LINEAR:
            return f"({self.lam:.6g})w d/dw"
        if kind == GermKind.ZERO:
            return f"w^{self.order} d/dw"
        if kind == GermKind.ZERO_WITH_RESIDUE:
            return f"w^{self.order}/(1 + ({self.lam:.6g})w^{self.order - 1}) d/dw"
        return f"exp(w^{self.order}) d/dw"

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'kind': self.kind.label, 'order': self.order}
        if self.kind in (GermKind.LINEAR, GermKind.ZERO_WITH_RESIDUE):
            out['lambda'] = complex_to_list(self.lam)
        out['residue'] = complex_to_list(self.residue())
        out['one_form_order'] = self.one_form_order()
        out['quadratic_order'] = self.quadratic_order()
        out['description'] = self.describe()
        return out


def germ_problems(g: GermSpec) -> List[str]:
    if g.kind == GermKind.POLE and g.order < 0:
        return [f"pole germ needs order >= 0 (got {g.order})"]
    if g.kind == GermKind.ZERO and g.order < 2:
        return [f"zero germ needs order >= 2 (got {g.order}); use linear for order 1"]
    if g.kind == GermKind.ZERO_WITH_RESIDUE:
        if g.order < 3:
            return [f"zero_with_residue germ needs order >= 3 (got {g.order})"]
        if g.lam == 0:
            return ["zero_with_residue germ needs a nonzero residue"]
    if g.kind == GermKind.LINEAR and g.lam == 0:
        return ["linear germ needs lambda != 0"]
    if g.kind == GermKind.EXP and g.order < 1:
        return [f"exp germ needs d >= 1 (got {g.order})"]
    return []


class GermQuotient(NamedTuple):
    germ: GermSpec
    # 字面 pushforward = normalization·（表中的标准芽）；exp 行是 ∞ 处的芽，无常数可比
    normalization: Optional[complex]

    def to_dict(self) -> Dict[str, Any]:
        scalar = self.normalization
        return {
            'germ': self.germ.to_dict(),
            'normalization': complex_to_list(scalar) if scalar is not None else None,
        }


def germ_quotient(g: GermSpec, k: int) -> GermQuotient:
    if k < 1:
        raise InvalidGermError(f"quotient order must be positive (got {k})")
    if k == 1:
        return GermQuotient(g, 1 + 0j)

    kind, nu = g.kind, g.order
    if kind == GermKind.POLE:
        if (nu + 1) % k:
            raise InvalidGermError(f"pole germ of order {nu} requires k | (nu+1): {k} does not divide {nu + 1}")
        return GermQuotient(GermSpec(GermKind.POLE, (nu + 1) // k - 1), complex(k))
    if kind == GermKind.LINEAR:
        # 字面结果是 kλw，表中记为 λw/k
        return GermQuotient(GermSpec(GermKind.LINEAR, 1, g.lam / k), complex(k * k))
    if kind == GermKind.ZERO:
        if nu == 2 or (nu - 1) % k:
            raise InvalidGermError(f"zero germ of order {nu} requires k | (nu-1) with nu >= 3: k = {k}")
        return GermQuotient(GermSpec(GermKind.ZERO, (nu - 1) // k + 1), complex(k))
    if kind == GermKind.ZERO_WITH_RESIDUE:
        raise InvalidGermError("a germ with nonzero residue has trivial isotropy, only k = 1 is allowed")
    if nu % k:
        raise InvalidGermError(f"exp germ of degree {nu} requires k | d: {k} does not divide {nu}")
    return GermQuotient(GermSpec(GermKind.EXP, nu // k), None)


def germ_field(g: GermSpec) -> VectorField:
    """把有限处的芽写成 E(s,r,d) 中的向量场（zero_with_residue 不在该族中）。"""
    if g.kind == GermKind.POLE:
        return field_from_divisor(1, RootMultiset(), RootMultiset(((0j, g.order),) if g.order else ()), RootMultiset())
    if g.kind == GermKind.LINEAR:
        return field_from_divisor(g.lam, RootMultiset(((0j, 1),)), RootMultiset(), RootMultiset())
    if g.kind == GermKind.ZERO:
        return field_from_divisor(1, RootMultiset(((0j, g.order),)), RootMultiset(), RootMultiset())
    if g.kind == GermKind.EXP:
        return field_from_divisor(1, RootMultiset(), RootMultiset(), RootMultiset(((0j, g.order),)))
    raise InvalidGermError(f"{g.describe()} is not a member of any E(s,r,d)")
