import logging

from src.cli.services.documents import read_document
from src.field_model import emit_field
from src.realize import parse_spec, realize_simple, realize_symmetric


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('realize', help='由 SymmetrySpec 文档构造对称场')
    parser.add_argument('spec', help='SymmetrySpec 文档（- 表示标准输入）')
    parser.add_argument('--simple', action='store_true', help='要求零点与极点全部单重')
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Realizing {'simple ' if args.simple else ''}field from {args.spec}")
    spec = parse_spec(read_document(args.spec))
    X = realize_simple(spec) if args.simple else realize_symmetric(spec)
    return {'success': True, 'field': emit_field(X), 'spec': spec.to_dict()}
