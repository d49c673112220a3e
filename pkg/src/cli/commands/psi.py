import logging

from src.cli.services.documents import load_field, parse_path_argument
from src.dictionary import PathSpec, distinguished_parameter
from src.field_model.schema import complex_to_list


logger = logging.getLogger(__name__)


def add_path_arguments(parser):
    parser.add_argument('field', help='字段文档（- 表示标准输入）')
    parser.add_argument('--path', required=True, help="折线顶点，例如 '[[0,0],[1,0]]'")
    parser.add_argument('--refinement', type=float, default=0.25, help='积分分段的最大长度')


def register(subparsers):
    parser = subparsers.add_parser('psi', help='沿路径积分 ω_X（分布参数 Ψ_X 的增量）')
    add_path_arguments(parser)
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Integrating the 1-form along {args.path} for {args.field}")
    X, tol = load_field(args.field)
    path = PathSpec(tuple(parse_path_argument(args.path)), args.refinement)
    value = distinguished_parameter(X, path, tol)
    return {'success': True, 'path': path.to_dict(), 'psi': complex_to_list(value)}
