"""
配置管理模块 - 读取和验证环境变量

所有数值容差都集中在这里；``Tolerances`` 是单次调用使用的不可变容差包，
由 ``Config`` 加上字段文档里的 ``tolerances`` 覆盖项组合而成。
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# 加载 .env 文件
load_dotenv()


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, '').strip()
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, '').strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


class Config:
    """应用配置类"""

    # 对称性判定的全局容差（CLI 文档中的 ESSFIELD_TOL）
    TOLERANCE = _env_float('ESSFIELD_TOL', 1e-7)

    # 求根
    ROOT_TOL = _env_float('ESSFIELD_ROOT_TOL', 1e-13)
    ROOT_MAX_ITER = _env_int('ESSFIELD_ROOT_MAX_ITER', 200)
    CLUSTER_TOL = _env_float('ESSFIELD_CLUSTER_TOL', 1e-7)

    # 求值与比较
    POLE_TOL = _env_float('ESSFIELD_POLE_TOL', 1e-12)
    EQUIV_TOL = _env_float('ESSFIELD_EQUIV_TOL', 1e-6)
    RESIDUE_TOL = _env_float('ESSFIELD_RESIDUE_TOL', 1e-8)
    EXP_OVERFLOW = _env_float('ESSFIELD_EXP_OVERFLOW', 700.0)

    # 数值积分（scipy.integrate.quad）
    QUAD_EPSABS = _env_float('ESSFIELD_QUAD_EPSABS', 1e-10)
    QUAD_LIMIT = _env_int('ESSFIELD_QUAD_LIMIT', 200)

    # 相图渲染
    PORTRAIT_PARALLEL = os.getenv('ESSFIELD_PORTRAIT_PARALLEL', '0').strip().lower() in (
        '1', 'true', 'yes', 'y', 'on'
    )
    PORTRAIT_WORKERS = _env_int('ESSFIELD_PORTRAIT_WORKERS', 4)

    LOG_LEVEL = os.getenv('ESSFIELD_LOG_LEVEL', 'WARNING').strip().upper() or 'WARNING'

    @classmethod
    def validate_config(cls) -> List[str]:
        """验证配置的有效性"""
        issues = []

        for name in ('TOLERANCE', 'ROOT_TOL', 'CLUSTER_TOL', 'POLE_TOL', 'EQUIV_TOL',
                     'RESIDUE_TOL', 'QUAD_EPSABS'):
            if getattr(cls, name) <= 0:
                issues.append(f"❌ {name} 必须为正数")

        if cls.ROOT_MAX_ITER < 1:
            issues.append("❌ ROOT_MAX_ITER 至少为 1")

        if cls.QUAD_LIMIT < 1:
            issues.append("❌ QUAD_LIMIT 至少为 1")

        if cls.EXP_OVERFLOW <= 0 or cls.EXP_OVERFLOW > 709:
            issues.append("❌ EXP_OVERFLOW 必须在 (0, 709] 之间")

        if cls.TOLERANCE > 1e-3:
            issues.append("⚠️  ESSFIELD_TOL 过大 (>1e-3)，对称性判定可能出现误报")

        if cls.PORTRAIT_WORKERS < 1:
            issues.append("❌ PORTRAIT_WORKERS 至少为 1")

        return issues

    @classmethod
    def print_config_status(cls) -> None:
        """打印配置状态"""
        print("\n" + "=" * 50)
        print("📋 essfield 配置状态")
        print("=" * 50)
        print(f"对称性容差 ESSFIELD_TOL: {cls.TOLERANCE:g}")
        print(f"求根: tol={cls.ROOT_TOL:g}, max_iter={cls.ROOT_MAX_ITER}, cluster={cls.CLUSTER_TOL:g}")
        print(f"极点保护: {cls.POLE_TOL:g}")
        print(f"等价判定: {cls.EQUIV_TOL:g}")
        print(f"留数判零: {cls.RESIDUE_TOL:g}")
        print(f"指数溢出阈值: |Re E| > {cls.EXP_OVERFLOW:g}")
        print(f"积分: epsabs={cls.QUAD_EPSABS:g}, limit={cls.QUAD_LIMIT}")
        print(f"相图并行: {cls.PORTRAIT_PARALLEL} (workers={cls.PORTRAIT_WORKERS})")
        print(f"日志级别: {cls.LOG_LEVEL}")

        issues = cls.validate_config()
        if issues:
            print("\n⚠️  配置问题:")
            for issue in issues:
                print(f"   {issue}")
        else:
            print("\n✅ 配置全部有效")

        print("=" * 50 + "\n")


@dataclass(frozen=True)
class Tolerances:
    """单次计算使用的容差。

    - symmetry: 重心一致性与旋转匹配的相对尺度（乘以 max(1, 除子尺度)）
    - root / cluster / max_iter: 多项式求根
    - pole: 求值时离极点的最小距离
    - equiv: 规范形比较
    - residue: 单值性判定
    """

    symmetry: float = 1e-7
    root: float = 1e-13
    cluster: float = 1e-7
    max_iter: int = 200
    pole: float = 1e-12
    equiv: float = 1e-6
    residue: float = 1e-8
    exp_overflow: float = 700.0
    quad_epsabs: float = 1e-10
    quad_limit: int = 200

    @classmethod
    def from_config(cls, overrides: Optional[Dict[str, Any]] = None) -> 'Tolerances':
        base = cls(
            symmetry=Config.TOLERANCE,
            root=Config.ROOT_TOL,
            cluster=Config.CLUSTER_TOL,
            max_iter=Config.ROOT_MAX_ITER,
            pole=Config.POLE_TOL,
            equiv=Config.EQUIV_TOL,
            residue=Config.RESIDUE_TOL,
            exp_overflow=Config.EXP_OVERFLOW,
            quad_epsabs=Config.QUAD_EPSABS,
            quad_limit=Config.QUAD_LIMIT,
        )
        if not overrides:
            return base
        return base.with_overrides(overrides)

    def with_overrides(self, overrides: Dict[str, Any]) -> 'Tolerances':
        known = {f.name: f.type for f in fields(self)}
        changes: Dict[str, Any] = {}
        for key, value in overrides.items():
            if key not in known:
                raise ValueError(f"unknown tolerance '{key}'")
            current = getattr(self, key)
            changes[key] = int(value) if isinstance(current, int) else float(value)
            if changes[key] <= 0:
                raise ValueError(f"tolerance '{key}' must be positive")
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def default_tolerances() -> Tolerances:
    return Tolerances.from_config()


if __name__ == '__main__':
    Config.print_config_status()
