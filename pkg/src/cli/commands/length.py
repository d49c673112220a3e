import logging

from src.cli.commands.psi import add_path_arguments
from src.cli.services.documents import load_field, parse_path_argument
from src.dictionary import PathSpec, flat_length


logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('length', help='路径在平坦度量 g_X 下的长度')
    add_path_arguments(parser)
    parser.set_defaults(handler=run)


def run(args):
    logger.info(f"Measuring flat length along {args.path} for {args.field}")
    X, tol = load_field(args.field)
    path = PathSpec(tuple(parse_path_argument(args.path)), args.refinement)
    return {'success': True, 'path': path.to_dict(), 'length': flat_length(X, path, tol)}
