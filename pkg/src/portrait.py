"""
相图模块 - Re X 的流线图（仿射坐标或 ∞ 处的射影坐标）

- 沿单位方向场 X/|X| 积分（弧长参数），Dormand–Prince 5(4) 自适应步长
- 方向只取辐角：arg λ + arg Q − arg P + Im E，e^E 不会溢出
- 射影坐标 w = 1/z 下积分 ẇ = −w²·f(1/w)
- 种子：确定性网格 + 按 seed 抖动；可用进程池并行，结果按种子顺序合并
- 标记：零点红色实心三角，极点蓝色叉，E 的根空心圆
"""

from __future__ import annotations

import cmath
import io
import logging
import math
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from PIL import Image  # noqa: E402

from src.config import Config, Tolerances, default_tolerances  # noqa: E402
from src.errors import InvalidInputError, SeedRejectionError  # noqa: E402
from src.field_model import VectorField, divisor_of, evaluate_poly, poly_values  # noqa: E402
from src.field_model.enums import Chart, OutputFormat, Termination  # noqa: E402
from src.field_model.schema import complex_to_list  # noqa: E402

logger = logging.getLogger(__name__)

# 射影坐标下 w = 0（本性奇点 ∞）周围的截断半径
PROJECTIVE_GUARD = 1e-6

# Dormand–Prince 系数
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)

# 步长控制：安全因子与缩放范围
_SAFETY = 0.9
_FACTOR_MIN, _FACTOR_MAX = 0.1, 4.0

# 终止原因的优先级（整条流线只报告一个）
_TERMINATION_PRIORITY = (
    Termination.REACHED_SINGULAR,
    Termination.STEP_FAILURE,
    Termination.LEFT_WINDOW,
    Termination.MAX_LENGTH,
)


@dataclass(frozen=True)
class PortraitConfig:
    chart: Chart = Chart.AFFINE
    # 窗口（射影坐标下是 w 平面的窗口）
    center: complex = 0j
    half_width: float = 2.0
    seed_grid: Tuple[int, int] = (12, 12)
    max_arclength: float = 20.0
    step_tolerance: float = 1e-6
    stop_radius_singular: float = 1e-3
    output: OutputFormat = OutputFormat.SVG
    image_size: Tuple[int, int] = (800, 800)
    seed: int = 0
    # 抖动幅度（网格单元的比例）
    jitter: float = 0.25
    max_steps: int = 5000
    parallel: Optional[bool] = None
    workers: Optional[int] = None

    def __post_init__(self):
        nx, ny = self.seed_grid
        if nx < 1 or ny < 1:
            raise InvalidInputError(f"seed grid must be at least 1x1, got {self.seed_grid}")
        for name in ('half_width', 'max_arclength', 'step_tolerance', 'stop_radius_singular'):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        if not 0 <= self.jitter < 1:
            raise InvalidInputError("jitter must lie in [0, 1)")
        if self.image_size[0] < 16 or self.image_size[1] < 16:
            raise InvalidInputError(f"image size too small: {self.image_size}")
        if self.max_steps < 1:
            raise InvalidInputError("max_steps must be positive")
        object.__setattr__(self, 'center', complex(self.center))

    @property
    def max_step(self) -> float:
        return 0.02 * self.half_width

    def in_window(self, z: complex) -> bool:
        w = z - self.center
        return abs(w.real) <= self.half_width and abs(w.imag) <= self.half_width

    def to_dict(self) -> Dict[str, Any]:
        return {
            'chart': self.chart.label,
            'center': complex_to_list(self.center),
            'half_width': self.half_width,
            'seed_grid': list(self.seed_grid),
            'max_arclength': self.max_arclength,
            'step_tolerance': self.step_tolerance,
            'stop_radius_singular': self.stop_radius_singular,
            'output': self.output.label,
            'image_size': list(self.image_size),
            'seed': self.seed,
        }


@dataclass(frozen=True)
class Streamline:
    points: Tuple[complex, ...]
    backward_termination: Termination
    forward_termination: Termination
    seed: complex = 0j

    @property
    def termination(self) -> Termination:
        ends = (self.backward_termination, self.forward_termination)
        for t in _TERMINATION_PRIORITY:
            if t in ends:
                return t
        return self.forward_termination

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=complex)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': complex_to_list(self.seed),
            'termination': self.termination.label,
            'points': [complex_to_list(p) for p in self.points],
        }


# -------------------------
# 方向场
# -------------------------


def _phase_function(X: VectorField, chart: Chart) -> Callable[[complex], float]:
    """返回 z ↦ arg f(z)（射影坐标下为 arg(−w²f(1/w))）。"""
    lam_arg = cmath.phase(X.lam)
    has_exp = X.d > 0

    def phase(z: complex) -> float:
        value = lam_arg + cmath.phase(evaluate_poly(X.Q, z)) - cmath.phase(evaluate_poly(X.P, z))
        if has_exp:
            value += evaluate_poly(X.E, z).imag
        return value

    if chart == Chart.AFFINE:
        return phase

    def projective(w: complex) -> float:
        return math.pi + 2 * cmath.phase(w) + phase(1 / w)

    return projective


def direction_field(X: VectorField, zs: np.ndarray, chart: Chart = Chart.AFFINE) -> np.ndarray:
    """单位方向 X/|X| 在网格上的取值（奇点处无意义）。"""
    zs = np.asarray(zs, dtype=complex)
    with np.errstate(divide='ignore', invalid='ignore'):
        if chart == Chart.PROJECTIVE:
            base = 1 / zs
        else:
            base = zs
        theta = np.angle(X.lam) + np.angle(poly_values(X.Q, base)) - np.angle(poly_values(X.P, base))
        if X.d:
            theta = theta + poly_values(X.E, base).imag
        if chart == Chart.PROJECTIVE:
            theta = theta + math.pi + 2 * np.angle(zs)
    return np.exp(1j * theta)


def singular_points(X: VectorField, chart: Chart, tol: Optional[Tolerances] = None) -> List[Tuple[complex, float]]:
    """当前坐标下的奇点及其保护半径的缩放（射影坐标的 ∞ 用固定截断）。"""
    div = divisor_of(X, tol or default_tolerances())
    points = div.zeros.locations + div.poles.locations
    if chart == Chart.AFFINE:
        return [(p, 1.0) for p in points]
    out = [(1 / p, 1.0) for p in points if p != 0]
    s, r, d = X.signature
    if d >= 1:
        out.append((0j, 0.0))
    elif 2 - s + r != 0:
        out.append((0j, 1.0))
    return out


# -------------------------
# 流线积分
# -------------------------


def _guard_hit(z: complex, singular: Sequence[Tuple[complex, float]], radius: float) -> bool:
    for p, scale in singular:
        guard = radius * scale if scale else PROJECTIVE_GUARD
        if abs(z - p) <= guard:
            return True
    return False


def _dopri_step(g: Callable[[complex], complex], y: complex, h: float) -> Tuple[complex, float]:
    """一步 Dormand–Prince：返回五阶解与误差估计。"""
    k = [g(y)]
    for i in range(1, 7):
        k.append(g(y + h * sum(a * kj for a, kj in zip(_A[i], k))))
    y5 = y + h * sum(b * kj for b, kj in zip(_B5, k))
    err = h * abs(sum((b5 - b4) * kj for b5, b4, kj in zip(_B5, _B4, k)))
    return y5, err


def _trace(
    phase: Callable[[complex], float],
    seed: complex,
    sign: float,
    cfg: PortraitConfig,
    singular: Sequence[Tuple[complex, float]],
) -> Tuple[List[complex], Termination]:
    def g(z: complex) -> complex:
        return sign * cmath.exp(1j * phase(z))

    y = seed
    h = cfg.max_step / 4
    h_min = 1e-12 * cfg.half_width
    length = 0.0
    points: List[complex] = []

    # 浮点累加的弧长与上限差一个舍入误差时也算到达
    limit = cfg.max_arclength * (1 - 1e-12)
    for _ in range(cfg.max_steps):
        if length >= limit:
            return points, Termination.MAX_LENGTH
        h = min(h, cfg.max_arclength - length)
        try:
            y_new, err = _dopri_step(g, y, h)
        except (ZeroDivisionError, OverflowError, ValueError):
            err = math.inf
            y_new = y
        if not math.isfinite(err) or not (math.isfinite(y_new.real) and math.isfinite(y_new.imag)):
            h *= _FACTOR_MIN
            if h < h_min:
                return points, Termination.STEP_FAILURE
            continue

        if err <= cfg.step_tolerance:
            y = y_new
            length += h
            points.append(y)
            if not cfg.in_window(y):
                return points, Termination.LEFT_WINDOW
            if _guard_hit(y, singular, cfg.stop_radius_singular):
                return points, Termination.REACHED_SINGULAR

        delta = _SAFETY * (cfg.step_tolerance / err) ** 0.2 if err > 0 else _FACTOR_MAX
        h = min(h * min(_FACTOR_MAX, max(_FACTOR_MIN, delta)), cfg.max_step)
        if h < h_min:
            return points, Termination.STEP_FAILURE
    return points, Termination.MAX_LENGTH


def streamline(
    X: VectorField,
    seed: complex,
    cfg: Optional[PortraitConfig] = None,
    tol: Optional[Tolerances] = None,
) -> Streamline:
    """从 seed 出发向前、向后积分 Re X 的轨线（单位速度参数化）。"""
    cfg = cfg or PortraitConfig()
    seed = complex(seed)
    singular = singular_points(X, cfg.chart, tol)
    if _guard_hit(seed, singular, cfg.stop_radius_singular):
        raise SeedRejectionError(f"seed {seed} lies inside the guard zone of a singular point", {'seed': complex_to_list(seed)})
    phase = _phase_function(X, cfg.chart)
    backward, back_end = _trace(phase, seed, -1.0, cfg, singular)
    forward, fwd_end = _trace(phase, seed, 1.0, cfg, singular)
    points = tuple(reversed(backward)) + (seed,) + tuple(forward)
    return Streamline(points, back_end, fwd_end, seed)


# -------------------------
# 渲染
# -------------------------


def seed_points(cfg: PortraitConfig) -> List[complex]:
    """网格单元中心加抖动；按行优先顺序返回。"""
    nx, ny = cfg.seed_grid
    rng = np.random.default_rng(cfg.seed)
    cell_x = 2 * cfg.half_width / nx
    cell_y = 2 * cfg.half_width / ny
    jitter = rng.uniform(-0.5, 0.5, size=(ny, nx, 2)) * cfg.jitter
    out = []
    for j in range(ny):
        for i in range(nx):
            x = -cfg.half_width + (i + 0.5 + jitter[j, i, 0]) * cell_x
            y = -cfg.half_width + (j + 0.5 + jitter[j, i, 1]) * cell_y
            out.append(cfg.center + complex(x, y))
    return out


def _trace_seed(seed: complex, X: VectorField, cfg: PortraitConfig, tol: Optional[Tolerances]) -> Optional[Streamline]:
    try:
        return streamline(X, seed, cfg, tol)
    except SeedRejectionError:
        return None


def _compute_sequential(X: VectorField, seeds: List[complex], cfg: PortraitConfig, tol) -> List[Optional[Streamline]]:
    return [_trace_seed(s, X, cfg, tol) for s in seeds]


def _compute_parallel(X: VectorField, seeds: List[complex], cfg: PortraitConfig, tol) -> List[Optional[Streamline]]:
    """进程池计算流线；pool.map 保持种子顺序。失败时回退到顺序计算。"""
    try:
        from multiprocessing import Pool, cpu_count

        workers = cfg.workers or Config.PORTRAIT_WORKERS
        num_processes = max(1, min(cpu_count() - 1, workers))
        with Pool(num_processes) as pool:
            return pool.map(partial(_trace_seed, X=X, cfg=cfg, tol=tol), seeds, chunksize=4)
    except Exception as e:
        logger.warning(f"Parallel streamline tracing failed: {e}, falling back to sequential")
        return _compute_sequential(X, seeds, cfg, tol)


def compute_streamlines(X: VectorField, cfg: PortraitConfig, tol: Optional[Tolerances] = None) -> List[Streamline]:
    seeds = seed_points(cfg)
    parallel = Config.PORTRAIT_PARALLEL if cfg.parallel is None else cfg.parallel
    if parallel and len(seeds) > 1:
        lines = _compute_parallel(X, seeds, cfg, tol)
    else:
        lines = _compute_sequential(X, seeds, cfg, tol)
    kept = [line for line in lines if line is not None]
    logger.info(f"traced {len(kept)} streamlines ({len(seeds) - len(kept)} seeds rejected)")
    return kept


@dataclass
class PortraitResult:
    data: bytes
    output: OutputFormat
    streamlines: List[Streamline] = field(default_factory=list)
    path: Optional[Path] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format': self.output.label,
            'bytes': len(self.data),
            'streamlines': len(self.streamlines),
            'path': str(self.path) if self.path else None,
        }


def _markers(X: VectorField, chart: Chart, tol: Optional[Tolerances]) -> Dict[str, List[complex]]:
    div = divisor_of(X, tol or default_tolerances())

    def to_chart(points: List[complex]) -> List[complex]:
        if chart == Chart.AFFINE:
            return points
        return [1 / p for p in points if p != 0]

    return {
        'zeros': to_chart(div.zeros.locations),
        'poles': to_chart(div.poles.locations),
        'exp_roots': to_chart(div.exp_roots.locations),
    }


def _draw(X: VectorField, cfg: PortraitConfig, lines: List[Streamline], tol: Optional[Tolerances]):
    width, height = cfg.image_size
    dpi = 100
    fig, ax = plt.subplots(figsize=(width / dpi, height / dpi), dpi=dpi)
    for line in lines:
        pts = line.as_array()
        ax.plot(pts.real, pts.imag, color='k', linewidth=0.6)

    marks = _markers(X, cfg.chart, tol)

    def scatter(points: List[complex], **kwargs):
        if points:
            arr = np.asarray(points, dtype=complex)
            ax.scatter(arr.real, arr.imag, zorder=3, **kwargs)

    scatter(marks['zeros'], marker='^', color='red', s=60, label='zeros')
    scatter(marks['poles'], marker='x', color='blue', s=60, linewidths=2, label='poles')
    scatter(marks['exp_roots'], marker='o', facecolors='none', edgecolors='green', s=50, label='E roots')
    if cfg.chart == Chart.PROJECTIVE:
        ax.plot([0], [0], marker='s', color='purple', markersize=5, zorder=3)

    c, hw = cfg.center, cfg.half_width
    ax.set_xlim(c.real - hw, c.real + hw)
    ax.set_ylim(c.imag - hw, c.imag + hw)
    ax.set_aspect('equal')
    s, r, d = X.signature
    chart = 'w = 1/z' if cfg.chart == Chart.PROJECTIVE else 'z'
    ax.set_title(f"Re X, E({s},{r},{d}), chart {chart}", fontsize=10)
    return fig


def render(
    X: VectorField,
    cfg: Optional[PortraitConfig] = None,
    path: Optional[Union[str, Path]] = None,
    tol: Optional[Tolerances] = None,
) -> PortraitResult:
    """绘制相图；SVG 对固定输入逐字节确定。给出 path 时同时写文件。"""
    cfg = cfg or PortraitConfig()
    lines = compute_streamlines(X, cfg, tol)

    with plt.rc_context({'svg.hashsalt': 'essfield', 'svg.fonttype': 'path'}):
        fig = _draw(X, cfg, lines, tol)
        try:
            if cfg.output == OutputFormat.SVG:
                buf = io.BytesIO()
                fig.savefig(buf, format='svg', metadata={'Date': None})
                data = buf.getvalue()
            else:
                fig.canvas.draw()
                rgba = np.asarray(fig.canvas.buffer_rgba(), dtype=np.uint8)
                image = Image.fromarray(rgba, 'RGBA')
                buf = io.BytesIO()
                image.save(buf, format='PNG', optimize=False)
                data = buf.getvalue()
        finally:
            plt.close(fig)

    out_path = None
    if path is not None:
        out_path = Path(path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_bytes(data)
        logger.info(f"portrait written to {out_path} ({len(data)} bytes)")
    return PortraitResult(data, cfg.output, lines, out_path)
