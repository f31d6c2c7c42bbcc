"""
scenario 命令：list / run NAME / export NAME
"""

import argparse
import sys

from mtc.cli.commands.check import add_analysis_arguments, write_report
from mtc.cli.scenarios import SCENARIOS, run_scenario, scenario_text
from mtc.cli.utils import EXIT_PASS, parse_tests, resolve_config


def register_scenario_command(subparsers: argparse._SubParsersAction) -> None:
    """注册 scenario 命令及其子命令"""
    parser = subparsers.add_parser("scenario", help="内置场景")
    actions = parser.add_subparsers(dest="action", required=True)

    list_parser = actions.add_parser("list", help="列出内置场景")
    list_parser.set_defaults(handler=run_list)

    run_parser = actions.add_parser("run", help="运行内置场景的全部判据")
    run_parser.add_argument("name", help="场景名称")
    add_analysis_arguments(run_parser)
    run_parser.set_defaults(handler=run_run)

    export_parser = actions.add_parser("export", help="输出场景的过程描述文件")
    export_parser.add_argument("name", help="场景名称")
    export_parser.set_defaults(handler=run_export)


def run_list(args: argparse.Namespace) -> int:
    width = max(len(name) for name in SCENARIOS) + 2
    for name, scenario in SCENARIOS.items():
        sys.stdout.write(f"{name.ljust(width)}{scenario.title}\n")
    return EXIT_PASS


def run_run(args: argparse.Namespace) -> int:
    config = resolve_config(args.tol, parse_tests(args.tests))
    report = run_scenario(args.name, config)
    return write_report(report, args.format, config.probability_digits)


def run_export(args: argparse.Namespace) -> int:
    text = scenario_text(args.name)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_PASS
