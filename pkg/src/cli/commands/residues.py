import logging

from src.cli.services.documents import load_field
from src.dictionary import residues


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('residues', help='ω_X 在 Q 的零点处的留数')
    parser.add_argument('field', help='字段文档（- 表示标准输入）')
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Computing residues for {args.field}")
    X, tol = load_field(args.field)
    report = residues(X, tol)
    return {'success': True, **report.to_dict(), 'single_valued': report.single_valued(tol.residue)}
