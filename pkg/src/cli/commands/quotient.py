import logging

from src.cli.services.documents import load_field
from src.quotient import quotient_field


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('quotient', help='商向量场 proj_*X')
    parser.add_argument('field', help='字段文档（- 表示标准输入）')
    parser.add_argument('-k', type=int, default=None, help='商的阶数（缺省取检测到的阶数）')
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Computing quotient of {args.field} (k={args.k})")
    X, tol = load_field(args.field)
    result = quotient_field(X, args.k, tol)
    return {'success': True, **result.to_dict()}
