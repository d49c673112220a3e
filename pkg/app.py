"""
essfield 命令行 - E(s,r,d) 中奇异复解析向量场的对称检测、规范形、实现、商与相图

stdout 只输出 JSON 报告；日志与诊断写到 stderr。
退出码：0 成功，1 领域错误，2 用法错误。
"""

import argparse
import logging
import sys

# 立即加载 .env 文件
from dotenv import load_dotenv
load_dotenv()

from src.config import Config  # noqa: E402
from src.errors import EssFieldError  # noqa: E402

logger = logging.getLogger('essfield')

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    from src.cli import register_commands

    parser = argparse.ArgumentParser(
        prog='essfield',
        description='X = λ·(Q/P)·e^E ∂/∂z 的分类、规范形、对称实现、商与相图',
    )
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v 为 INFO，-vv 为 DEBUG')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    register_commands(subparsers)
    return parser


def _configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, Config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def main(argv=None) -> int:
    from src.cli.services.documents import UsageError, error_payload, write_json

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE_ERROR
    _configure_logging(args.verbose)

    if not getattr(args, 'handler', None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE_ERROR

    try:
        payload = args.handler(args)
    except UsageError as e:
        logger.error(f"usage error: {e}")
        return EXIT_USAGE_ERROR
    except EssFieldError as e:
        logger.error(f"{args.command} failed [{e.code}]: {e.message}")
        write_json(error_payload(e))
        return EXIT_DOMAIN_ERROR
    except OSError as e:
        logger.exception(f"I/O failure in {args.command}")
        write_json({'success': False, 'error': {'code': 'io_error', 'message': str(e), 'details': {}}})
        return EXIT_DOMAIN_ERROR

    if payload is not None:
        write_json(payload)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
