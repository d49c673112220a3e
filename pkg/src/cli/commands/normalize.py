import logging

from src.cli.services.documents import load_field
from src.field_model.enums import GaugeKind
from src.normal_form import canonical_form, canonical_metric_form


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('normalize', help='计算规范形')
    parser.add_argument('field', help='字段文档（- 表示标准输入）')
    parser.add_argument('--gauge', choices=['exp', 'zero', 'pole'], help='整体截面（缺省按 exp > zero > pole）')
    parser.add_argument('--metric', action='store_true', help='度量分类：额外商掉 S¹ 旋转')
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Normalizing {args.field} (gauge={args.gauge or 'default'}, metric={args.metric})")
    X, tol = load_field(args.field)
    kind = GaugeKind.from_label(args.gauge) if args.gauge else None
    if args.metric:
        form, theta = canonical_metric_form(X, kind, tol)
        return {'success': True, 'data': {**form.to_dict(), 'theta': theta}}
    form = canonical_form(X, kind, tol)
    return {'success': True, 'data': form.to_dict()}
