"""
CLI Utilities
错误结构、请求标识与命令调用日志
"""

import json
import os
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from mtc.core.config_manager import ConfigManager
from mtc.core.log_manager import log
from mtc.models import AnalysisConfig

# ==================== 常量定义 ====================
CALLS_LOG = Path(os.getenv("MTC_CALLS_LOG", str(Path.home() / ".mtc" / "calls.jsonl"))).expanduser()
LOG_CALLS_ENABLED = os.getenv("MTC_LOG_CALLS", "0").lower() in {"1", "true", "yes"}

# 退出码
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


def new_request_id() -> str:
    """生成请求标识，用于关联日志与输出"""
    return uuid.uuid4().hex[:12]


def build_error_payload(
    code: str,
    message: str,
    retryable: bool = False,
    details: dict | None = None,
) -> dict[str, Any]:
    """构建统一错误结构"""
    return {
        "error_code": code,
        "retryable": retryable,
        "error_message": message,
        "error_details": details or {},
    }


def format_validation_error(exc: ValidationError) -> list[str]:
    """格式化 Pydantic 验证错误"""
    return [
        f"{'.'.join(str(part) for part in err['loc']) or 'document'}: {err['msg']}"
        for err in exc.errors()
    ]


def log_command_call(
    command: str,
    request_id: str,
    status: str,
    latency_ms: int,
    error_code: str | None = None,
    meta: dict[str, Any] | None = None,
) -> None:
    """记录命令调用；MTC_LOG_CALLS 开启时追加写入 JSONL"""
    log.debug(f"[{request_id}] {command} {status} {latency_ms}ms" + (f" {error_code}" if error_code else ""))
    if not LOG_CALLS_ENABLED:
        return
    record = {
        "timestamp": datetime.now().astimezone().isoformat(),
        "command": command,
        "request_id": request_id,
        "status": status,
        "latency_ms": latency_ms,
    }
    if error_code:
        record["error_code"] = error_code
    if meta:
        record["meta"] = meta

    try:
        CALLS_LOG.parent.mkdir(parents=True, exist_ok=True)
        with CALLS_LOG.open("a", encoding="utf-8") as file:
            file.write(json.dumps(record, ensure_ascii=False) + "\n")
    except Exception as exc:
        log.warning(f"命令调用日志写入失败: {exc}")


def parse_times(raw: str | None) -> list[int] | None:
    """"t1,t3" 或 "1,3" -> [1, 3]；None 表示全部时刻，空串表示不测量"""
    if raw is None:
        return None
    times = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        digits = part[1:] if part[:1] in {"t", "T"} else part
        if not digits.isdigit():
            raise ValueError(f"无法识别的时刻: {part!r}")
        times.append(int(digits))
    return times


def parse_tests(raw: str | None) -> list[str] | None:
    if raw is None:
        return None
    return [t.strip() for t in raw.split(",") if t.strip()]


def resolve_config(tol: float | None = None, tests: list[str] | None = None) -> AnalysisConfig:
    """在 ConfigManager 配置之上应用单次运行的命令行覆盖"""
    config = ConfigManager.load_config()
    updates: dict[str, Any] = {}
    if tol is not None:
        updates["tolerance"] = tol
    if tests is not None:
        updates["tests"] = tests
    if not updates:
        return config
    try:
        return AnalysisConfig(**{**config.model_dump(), **updates})
    except ValidationError as e:
        raise ValueError("; ".join(format_validation_error(e))) from e


__all__ = [
    "CALLS_LOG",
    "EXIT_PASS",
    "EXIT_FAIL",
    "EXIT_INVALID",
    "new_request_id",
    "build_error_payload",
    "format_validation_error",
    "log_command_call",
    "parse_times",
    "parse_tests",
    "resolve_config",
]
