"""
check 命令：对过程描述文件运行经典性判据
"""

import argparse
import sys

from mtc.checks.analyzer import analyze
from mtc.cli.process_file import read_process_file
from mtc.cli.report import ReportEmitter
from mtc.cli.utils import EXIT_FAIL, EXIT_PASS, parse_tests, resolve_config
from mtc.core.log_manager import log
from mtc.models import CRITERIA, ClassicalityReport


def add_analysis_arguments(parser: argparse.ArgumentParser) -> None:
    """check 与 scenario run 共用的参数"""
    parser.add_argument(
        "--tests",
        default=None,
        help=f"逗号分隔的判据列表，可选: {','.join(CRITERIA)}；默认取配置",
    )
    parser.add_argument("--tol", type=float, default=None, help="判据容差，默认取配置（MTC_TOLERANCE 可覆盖）")
    parser.add_argument("--format", choices=["text", "json"], default="text", help="输出格式")


def write_report(report: ClassicalityReport, fmt: str, digits: int) -> int:
    sys.stdout.write(ReportEmitter(fmt, digits).report(report))
    if report.violations:
        log.error(f"{report.process.name}: 判据之间的蕴含关系被违反 {len(report.violations)} 次")
    return EXIT_PASS if report.passed else EXIT_FAIL


def register_check_command(subparsers: argparse._SubParsersAction) -> None:
    """注册 check 命令"""
    parser = subparsers.add_parser("check", help="运行经典性判据并输出报告")
    parser.add_argument("file", help="过程描述文件（JSON）")
    add_analysis_arguments(parser)
    parser.set_defaults(handler=run_check)


def run_check(args: argparse.Namespace) -> int:
    config = resolve_config(args.tol, parse_tests(args.tests))
    doc = read_process_file(args.file, config.tolerance)
    report = analyze(
        doc.process,
        config,
        initial_set=doc.initial_set,
        basis=doc.basis,
        annotations=doc.annotations,
    )
    return write_report(report, args.format, config.probability_digits)
