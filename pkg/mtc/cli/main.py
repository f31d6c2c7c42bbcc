"""
Multi-time Classicality CLI
命令行主入口

架构说明:
- cli/process_file.py: 过程描述文件的解析与序列化
- cli/scenarios.py: 内置场景注册表
- cli/report.py: text / json 报告输出
- cli/utils.py: 错误结构、调用日志与配置覆盖
- cli/commands/*.py: 各子命令实现

退出码: 0 所选判据全部通过，1 存在未通过的判据，2 输入无效
"""

from __future__ import annotations

import argparse
import sys
import time

from mtc import __version__
from mtc.cli.commands import (
    register_check_command,
    register_probs_command,
    register_scenario_command,
    register_validate_command,
)
from mtc.cli.report import ReportEmitter
from mtc.cli.utils import (
    EXIT_FAIL,
    EXIT_INVALID,
    EXIT_PASS,
    build_error_payload,
    log_command_call,
    new_request_id,
)
from mtc.core.errors import MtcError
from mtc.core.log_manager import log


def register_all_commands(subparsers: argparse._SubParsersAction) -> None:
    """注册所有子命令"""
    register_validate_command(subparsers)
    register_probs_command(subparsers)
    register_check_command(subparsers)
    register_scenario_command(subparsers)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtc",
        description="马尔可夫多时刻量子过程的统计模拟与经典性判据",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all_commands(subparsers)
    return parser


def _command_name(args: argparse.Namespace) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def main(argv: list[str] | None = None) -> int:
    """CLI 入口函数，返回退出码"""
    parser = _build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")

    request_id = new_request_id()
    start_time = time.perf_counter()
    error_code = None
    try:
        code = args.handler(args)
    except MtcError as exc:
        error_code = exc.error_code
        payload = build_error_payload(exc.error_code, exc.message, False, exc.details)
        code = EXIT_INVALID
    except ValueError as exc:
        # 配置与参数错误（--tol、--tests、--measure-at、MTC_CONFIG 等）
        error_code = "INVALID_INPUT"
        payload = build_error_payload(error_code, str(exc), False)
        code = EXIT_INVALID
    except FileNotFoundError as exc:
        error_code = "FILE_NOT_FOUND"
        payload = build_error_payload(error_code, str(exc), False)
        code = EXIT_INVALID

    if error_code:
        log.error(f"[{request_id}] {_command_name(args)} 失败: {error_code}")
        output = ReportEmitter(fmt).error({"status": "error", "request_id": request_id, **payload})
        (sys.stdout if fmt == "json" else sys.stderr).write(output)

    status = {EXIT_PASS: "ok", EXIT_FAIL: "fail"}.get(code, "error")
    latency_ms = int((time.perf_counter() - start_time) * 1000)
    log_command_call(_command_name(args), request_id, status, latency_ms, error_code)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
