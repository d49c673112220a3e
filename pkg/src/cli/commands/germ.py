import logging

from src.cli.services.documents import parse_complex_argument
from src.errors import InvalidGermError
from src.field_model.enums import GermKind
from src.quotient import GermSpec, germ_quotient


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('germ', help='标准芽的商（pole/linear/zero/zero_with_residue/exp）')
    parser.add_argument('kind', help='芽的类型')
    parser.add_argument('order', type=int, nargs='?', default=1, help='阶数 ν 或 d')
    parser.add_argument('-k', type=int, required=True, help='商的阶数')
    parser.add_argument('--lambda', dest='lam', default='1', help="λ，格式 're,im'")
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Quotient of germ {args.kind}({args.order}) by Z_{args.k}")
    try:
        kind = GermKind.from_label(args.kind)
    except ValueError as e:
        raise InvalidGermError(str(e)) from e
    germ = GermSpec(kind, args.order, parse_complex_argument(args.lam, '--lambda'))
    result = germ_quotient(germ, args.k)
    return {'success': True, 'input': germ.to_dict(), 'k': args.k, **result.to_dict()}
