import logging

from src.cli.services.documents import load_field
from src.symmetry_analyzer import SymmetryAnalyzer


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('analyze', help='检测迷向群并给出整族判定')
    parser.add_argument('field', help='字段文档（- 表示标准输入）')
    parser.set_defaults(handler=run)


def run(args):
    """迷向群 + family_report"""
    logger.info(f"Analyzing symmetry of {args.field}")
    X, tol = load_field(args.field)
    analyzer = SymmetryAnalyzer(tol)
    analyzer.load_field(X)
    stats = analyzer.analyze()
    return {'success': True, 'data': stats.to_dict()}
