import logging
from pathlib import Path

from src.cli.services.documents import load_field, parse_complex_argument
from src.field_model.enums import Chart, OutputFormat


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('portrait', help='绘制 Re X 的相图（SVG/PNG）')
    parser.add_argument('field', help='字段文档（- 表示标准输入）')
    parser.add_argument('-o', '--out', required=True, help='输出文件')
    parser.add_argument('--format', choices=['svg', 'png'], default=None, help='缺省按输出文件后缀')
    parser.add_argument('--chart', choices=['affine', 'projective'], default='affine')
    parser.add_argument('--center', default='0,0', help="窗口中心 're,im'")
    parser.add_argument('--half-width', type=float, default=2.0)
    parser.add_argument('--grid', type=int, nargs=2, default=(12, 12), metavar=('NX', 'NY'))
    parser.add_argument('--max-length', type=float, default=20.0, help='单向最大弧长')
    parser.add_argument('--step-tol', type=float, default=1e-6)
    parser.add_argument('--stop-radius', type=float, default=1e-3, help='奇点保护半径')
    parser.add_argument('--size', type=int, nargs=2, default=(800, 800), metavar=('W', 'H'))
    parser.add_argument('--seed', type=int, default=0, help='抖动随机种子')
    parser.add_argument('--parallel', action='store_true', help='用进程池计算流线')
    parser.set_defaults(handler=run)


def run(args):
    from src.portrait import PortraitConfig, render

    logger.info(f"Rendering portrait of {args.field} to {args.out}")
    X, tol = load_field(args.field)
    out = Path(args.out)
    fmt = args.format or ('png' if out.suffix.lower() == '.png' else 'svg')
    cfg = PortraitConfig(
        chart=Chart.from_label(args.chart),
        center=parse_complex_argument(args.center, '--center'),
        half_width=args.half_width,
        seed_grid=tuple(args.grid),
        max_arclength=args.max_length,
        step_tolerance=args.step_tol,
        stop_radius_singular=args.stop_radius,
        output=OutputFormat.from_label(fmt),
        image_size=tuple(args.size),
        seed=args.seed,
        parallel=True if args.parallel else None,
    )
    result = render(X, cfg, out, tol)
    return {'success': True, 'data': result.to_dict(), 'config': cfg.to_dict()}
