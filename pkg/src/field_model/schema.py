"""向量场数据模型。

X = λ·(Q/P)·e^E ∂/∂z ∈ E(s,r,d)：

- ``AffineMap``：Aut(ℂ) 的元素 T(w) = a·w + b
- ``RootMultiset``：无序根多重集（位置 + 重数）
- ``Divisor``：零点 Z、极点 P、指数根 E 三个多重集
- ``VectorField``：(λ, Q, P, E)，Q、P 首一，E 带首项系数 c₀

说明：
- E 以完整多项式 c₀∏(z−eᵢ) 保存（含常数项），它的根就是 E 多重集
- d = 0 时 E 是零多项式，e^E ≡ 1
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.errors import InvalidInputError

if TYPE_CHECKING:
    from .poly_core import Polynomial


def as_complex(value: Any, what: str = 'value') -> complex:
    """把输入转换为有限的 complex；NaN/inf 拒绝。"""
    try:
        z = complex(value)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{what} is not a complex number: {value!r}") from e
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"{what} must be finite, got {z!r}")
    return z


def complex_sort_key(z: complex) -> Tuple[float, float]:
    return (z.real, z.imag)


def complex_to_list(z: complex) -> List[float]:
    z = complex(z)
    # -0.0 会让输出在不同平台上不一致
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


@dataclass(frozen=True)
class AffineMap:
    a: complex = 1 + 0j
    b: complex = 0j

    def __post_init__(self):
        a = as_complex(self.a, 'a')
        b = as_complex(self.b, 'b')
        if a == 0:
            raise InvalidInputError("affine map requires a != 0")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @classmethod
    def identity(cls) -> 'AffineMap':
        return cls(1, 0)

    @classmethod
    def rotation(cls, k: int, center: complex = 0j) -> 'AffineMap':
        """绕 C 旋转 2π/k：T(w) = e^{i2π/k}·w + C·(1 − e^{i2π/k})。"""
        g = cmath.exp(2j * math.pi / k)
        return cls(g, complex(center) * (1 - g))

    def __call__(self, w: complex) -> complex:
        return self.a * w + self.b

    def inverse(self) -> 'AffineMap':
        return AffineMap(1 / self.a, -self.b / self.a)

    def apply_inverse(self, z: complex) -> complex:
        return (z - self.b) / self.a

    def compose(self, other: 'AffineMap') -> 'AffineMap':
        """(self ∘ other)(w) = self(other(w))。"""
        return AffineMap(self.a * other.a, self.a * other.b + self.b)

    def is_identity(self, tol: float = 1e-9) -> bool:
        return abs(self.a - 1) <= tol and abs(self.b) <= tol * max(1.0, abs(self.b))

    def close_to(self, other: 'AffineMap', tol: float = 1e-9) -> bool:
        scale = max(1.0, abs(self.b), abs(other.b))
        return abs(self.a - other.a) <= tol * max(1.0, abs(self.a)) and abs(self.b - other.b) <= tol * scale

    def to_dict(self) -> Dict[str, Any]:
        return {'a': complex_to_list(self.a), 'b': complex_to_list(self.b)}


def match_pairs(
    left: Sequence[Tuple[complex, int]],
    right: Sequence[Tuple[complex, int]],
    tol: float,
    key: Optional[Callable[[complex], Any]] = None,
) -> bool:
    """多重集相等：按 key 排序后做确定性的最近邻分配。"""
    if sum(m for _, m in left) != sum(m for _, m in right) or len(left) != len(right):
        return False
    if key is not None:
        left = sorted(left, key=lambda item: key(item[0]))
        right = sorted(right, key=lambda item: key(item[0]))
    used = [False] * len(right)
    for loc, mult in left:
        best = -1
        best_dist = math.inf
        for j, (cand, cand_mult) in enumerate(right):
            if used[j] or cand_mult != mult:
                continue
            dist = abs(cand - loc)
            if dist < best_dist:
                best, best_dist = j, dist
        if best < 0 or best_dist > tol:
            return False
        used[best] = True
    return True


@dataclass(frozen=True)
class RootMultiset:
    """无序根多重集。位置按 (Re, Im) 排序保存，保证输出确定。"""

    roots: Tuple[Tuple[complex, int], ...] = ()

    def __post_init__(self):
        cleaned = []
        for loc, mult in self.roots:
            z = as_complex(loc, 'root')
            m = int(mult)
            if m < 1 or m != mult:
                raise InvalidInputError(f"root multiplicity must be a positive integer, got {mult!r}")
            cleaned.append((z, m))
        cleaned.sort(key=lambda item: complex_sort_key(item[0]))
        object.__setattr__(self, 'roots', tuple(cleaned))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[complex, int]], merge_tol: float = 0.0) -> 'RootMultiset':
        """由 (位置, 重数) 构造；距离 ≤ merge_tol·max(1, |z|) 的位置合并。"""
        merged: List[List[Any]] = []
        for loc, mult in pairs:
            z = as_complex(loc, 'root')
            for entry in merged:
                if abs(entry[0] - z) <= merge_tol * max(1.0, abs(z)):
                    total = entry[1] + int(mult)
                    entry[0] = (entry[0] * entry[1] + z * int(mult)) / total
                    entry[1] = total
                    break
            else:
                merged.append([z, int(mult)])
        return cls(tuple((z, m) for z, m in merged))

    @classmethod
    def from_points(cls, points: Iterable[complex], merge_tol: float = 0.0) -> 'RootMultiset':
        return cls.from_pairs(((p, 1) for p in points), merge_tol)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def is_empty(self) -> bool:
        return not self.roots

    @property
    def locations(self) -> List[complex]:
        return [z for z, _ in self.roots]

    def points(self) -> List[complex]:
        """展开重数后的点列表。"""
        out: List[complex] = []
        for z, m in self.roots:
            out.extend([z] * m)
        return out

    def scale(self) -> float:
        return max((abs(z) for z, _ in self.roots), default=0.0)

    def barycenter(self) -> Optional[complex]:
        if not self.roots:
            return None
        return sum(z * m for z, m in self.roots) / self.total

    def multiplicity_at(self, z: complex, tol: float) -> int:
        return sum(m for loc, m in self.roots if abs(loc - z) <= tol)

    def map(self, fn: Callable[[complex], complex]) -> 'RootMultiset':
        return RootMultiset(tuple((fn(z), m) for z, m in self.roots))

    def matches(self, other: 'RootMultiset', tol: float) -> bool:
        return match_pairs(self.roots, other.roots, tol)

    def to_list(self) -> List[List[Any]]:
        return [[complex_to_list(z), m] for z, m in self.roots]


@dataclass(frozen=True)
class Divisor:
    zeros: RootMultiset
    poles: RootMultiset
    exp_roots: RootMultiset

    def parts(self) -> Tuple[RootMultiset, RootMultiset, RootMultiset]:
        return (self.zeros, self.poles, self.exp_roots)

    def scale(self) -> float:
        return max(part.scale() for part in self.parts())

    def total(self) -> int:
        return sum(part.total for part in self.parts())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'zeros': self.zeros.to_list(),
            'poles': self.poles.to_list(),
            'exp_roots': self.exp_roots.to_list(),
        }


@dataclass(frozen=True)
class VectorField:
    """X = λ·(Q/P)·e^E ∂/∂z。

    构造请用 ``core.make_field``（负责把 Q、P 归一为首一，并把常数 E 并入 λ）；
    这里只保存已经规范化的数据。
    """

    lam: complex
    Q: 'Polynomial'
    P: 'Polynomial'
    E: 'Polynomial'

    def __post_init__(self):
        object.__setattr__(self, 'lam', as_complex(self.lam, 'lambda'))

    @property
    def s(self) -> int:
        return self.Q.degree

    @property
    def r(self) -> int:
        return self.P.degree

    @property
    def d(self) -> int:
        return 0 if self.E.is_zero else self.E.degree

    @property
    def signature(self) -> Tuple[int, int, int]:
        return (self.s, self.r, self.d)

    @property
    def c0(self) -> complex:
        """E 的首项系数；d = 0 时约定为 1。"""
        return self.E.leading if self.d >= 1 else 1 + 0j

    def describe(self) -> str:
        s, r, d = self.signature
        return f"VectorField(λ={self.lam:.6g}, E({s},{r},{d}))"
