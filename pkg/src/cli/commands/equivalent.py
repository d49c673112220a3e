import logging

from src.cli.services.documents import load_field
from src.field_model.enums import EquivalenceMode
from src.normal_form import are_equivalent


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('equivalent', help='判定两个场是否等价并给出见证映射')
    parser.add_argument('first', help='字段文档 A')
    parser.add_argument('second', help='字段文档 B')
    parser.add_argument('--metric', action='store_true', help='在 Aut(ℂ)×S¹ 下比较')
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Comparing {args.first} with {args.second} (metric={args.metric})")
    X1, tol = load_field(args.first)
    X2, _ = load_field(args.second)
    mode = EquivalenceMode.METRIC if args.metric else EquivalenceMode.ANALYTIC
    result = are_equivalent(X1, X2, mode, tol)
    if result is None:
        logger.info("fields are inequivalent")
        return {'success': True, 'equivalent': False, 'result': 'inequivalent'}
    return {'success': True, 'equivalent': True, 'mode': mode.label, **result.to_dict()}
