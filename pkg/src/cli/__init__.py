"""命令注册。

每个子命令一个模块，提供 ``register(subparsers)``；处理函数挂在 ``handler`` 上，
返回 ``{'success': True, ...}`` 载荷（不需要输出 JSON 时返回 None）。
"""

from __future__ import annotations


def register_commands(subparsers) -> None:
    # 延迟导入，避免 import 时加载 matplotlib 等重依赖
    from .commands import (
        analyze,
        config,
        equivalent,
        germ,
        length,
        normalize,
        portrait,
        psi,
        quotient,
        realize,
        residues,
    )

    for module in (analyze, normalize, equivalent, realize, quotient, germ, residues, psi, length, portrait, config):
        module.register(subparsers)
