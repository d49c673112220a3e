from __future__ import annotations

from enum import IntEnum


class LabelledEnum(IntEnum):
    """IntEnum with a lowercase text label used in documents and CLI flags."""

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, text: str):
        key = str(text).strip().upper().replace('-', '_')
        if key in cls.__members__:
            return cls[key]
        # 前缀简写：exp -> EXP_CENTERED
        matches = [m for m in cls if m.name.startswith(key + '_')]
        if len(matches) == 1:
            return matches[0]
        choices = ', '.join(m.label for m in cls)
        raise ValueError(f"unknown {cls.__name__} '{text}' (expected one of: {choices})")


# 规范形规范（global section 的三种选法）
class GaugeKind(LabelledEnum):
    EXP_CENTERED = 1  # E 首一且次高项为 0
    ZERO_CENTERED = 2  # Q 次高项为 0
    POLE_CENTERED = 3  # P 次高项为 0


class IsotropyKind(LabelledEnum):
    TRIVIAL = 1
    CYCLIC = 2
    CONTINUOUS = 3  # 只在 d=0, s=r+1 时出现（λz 型）


class EquivalenceMode(LabelledEnum):
    ANALYTIC = 1
    METRIC = 2  # 允许额外的 S¹ 旋转 λ ↦ e^{iθ}λ


class CenterKind(LabelledEnum):
    POLE = 1
    ZERO = 2


class GermKind(LabelledEnum):
    POLE = 1  # 1/z^ν
    LINEAR = 2  # λz
    ZERO = 3  # z^ν
    ZERO_WITH_RESIDUE = 4  # z^ν/(1+λz^{ν-1})
    EXP = 5  # e^{z^d}，∞ 处的芽


class InfinityKind(LabelledEnum):
    REGULAR = 1
    ZERO = 2
    POLE = 3
    ESSENTIAL = 4


class Termination(LabelledEnum):
    LEFT_WINDOW = 1
    REACHED_SINGULAR = 2
    MAX_LENGTH = 3
    STEP_FAILURE = 4


class Chart(LabelledEnum):
    AFFINE = 1
    PROJECTIVE = 2


class OutputFormat(LabelledEnum):
    SVG = 1
    PNG = 2
