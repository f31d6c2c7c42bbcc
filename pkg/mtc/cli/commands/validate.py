"""
validate 命令：解析并校验过程描述文件
"""

import argparse
import sys

from mtc.cli.process_file import read_process_file
from mtc.cli.report import ReportEmitter
from mtc.cli.utils import EXIT_PASS, resolve_config
from mtc.core.process import validate_process


def register_validate_command(subparsers: argparse._SubParsersAction) -> None:
    """注册 validate 命令"""
    parser = subparsers.add_parser("validate", help="解析并校验过程描述文件")
    parser.add_argument("file", help="过程描述文件（JSON）")
    parser.add_argument("--tol", type=float, default=None, help="校验容差，默认取配置")
    parser.add_argument("--format", choices=["text", "json"], default="text", help="输出格式")
    parser.set_defaults(handler=run_validate)


def run_validate(args: argparse.Namespace) -> int:
    config = resolve_config(args.tol)
    # 无效文件在 read_process_file 中抛出 ProcessFileError，由 main 统一输出诊断
    doc = read_process_file(args.file, config.tolerance)
    report = validate_process(doc.process, config.tolerance)
    sys.stdout.write(ReportEmitter(args.format).validation(report))
    return EXIT_PASS
