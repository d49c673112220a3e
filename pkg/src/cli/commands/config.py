from src.config import Config, default_tolerances


def register(subparsers):
    parser = subparsers.add_parser('config', help='显示当前配置')
    parser.add_argument('--json', action='store_true', help='以 JSON 输出')
    parser.set_defaults(handler=run)


def run(args):
    if not args.json:
        Config.print_config_status()
        return None
    return {
        'success': True,
        'tolerances': default_tolerances().to_dict(),
        'issues': Config.validate_config(),
    }
