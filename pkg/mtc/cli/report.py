# @time:    2026-03-09
"""
报告输出：text（人读）与 json（机读，键排序，可由对应 pydantic 模型 model_validate_json 还原）
"""

from __future__ import annotations

import json
from typing import Any

from pydantic import BaseModel

from mtc.core.log_manager import log
from mtc.models import (
    ClassicalityReport,
    Context,
    ContextRecord,
    DistributionReport,
    ValidationReport,
)

FORMATS = ("text", "json")


def _context(pairs: Context) -> str:
    return ", ".join(f"t{t}={m}" for t, m in pairs) or "∅"


class ReportEmitter:
    """
    报告输出器，同一输入总是产生逐字节相同的输出。
    """

    def __init__(self, fmt: str = "text", digits: int = 12):
        """
        :param fmt: 输出格式 ('text' 或 'json')
        :param digits: text 格式下数值的有效数字位数
        """
        if fmt not in FORMATS:
            raise ValueError(f"不支持的输出格式: {fmt}，可选 {FORMATS}")
        self.fmt = fmt
        self.digits = digits

    def _num(self, x: float) -> str:
        return f"{x:.{self.digits}g}"

    @staticmethod
    def _json(model: BaseModel | dict[str, Any]) -> str:
        data = model.model_dump(mode="json") if isinstance(model, BaseModel) else model
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"

    def _record(self, r: ContextRecord) -> str:
        text = f"t{r.time} history=[{_context(r.history)}]"
        if r.outcome is not None:
            text += f" outcome={r.outcome}"
        text += f" future=[{_context(r.future)}] residual={self._num(r.residual)}"
        if r.value is not None:
            text += f" value={self._num(r.value)}"
        if r.state_index is not None:
            text += f" state={r.state_index}"
        return text

    # ==================== 经典性报告 ====================

    def report(self, r: ClassicalityReport) -> str:
        if self.fmt == "json":
            return self._json(r)

        meta = r.process
        lines = [f"process: {meta.name} (d={meta.dimension}, n={meta.times})"]
        if meta.description:
            lines.append(meta.description)
        hermitian = ", ".join(f"t{i}={'yes' if h else 'no'}" for i, h in enumerate(meta.hermitian_instruments, 1))
        lines.append(f"hermitian kraus: {hermitian}")
        lines.append(f"tolerance: {self._num(r.tolerance)}  audit tolerance: {self._num(r.audit_tolerance)}")
        lines.append("")
        lines.append(f"{'criterion':<14}{'verdict':<9}max residual")
        for name, res in r.results.items():
            if not res.applicable:
                lines.append(f"{name:<14}{'N/A':<9}- ({res.reason})")
                continue
            verdict = "PASS" if res.passed else "FAIL"
            lines.append(f"{name:<14}{verdict:<9}{self._num(res.max_residual)}")

        failing = [res for res in r.results.values() if res.applicable and not res.passed]
        if failing:
            lines += ["", "worst contexts:"]
            for res in failing:
                worst = max(res.records, key=lambda rec: rec.residual)
                lines.append(f"  {res.criterion}: {self._record(worst)}")

        details = [(res.criterion, k, v) for res in r.results.values() for k, v in res.summary.items()]
        if details:
            lines += ["", "details:"]
            lines += [f"  {name} {key} = {self._num(value)}" for name, key, value in details]

        flagged = [res for res in r.results.values() if res.flags]
        if flagged:
            lines += ["", "flags:"]
            lines += [f"  {res.criterion}: {', '.join(res.flags)}" for res in flagged]

        counts = {status: sum(a.status == status for a in r.audit) for status in ("holds", "violated", "skipped")}
        lines += ["", f"audit: {counts['holds']} holds, {counts['skipped']} skipped, {counts['violated']} violated"]
        for entry in r.violations:
            at = f" @t{entry.time}" if entry.time is not None else ""
            lines.append(f"  VIOLATED {entry.rule}{at}: {entry.reason}")

        if r.annotations:
            lines += ["", "annotations:"]
            lines += [f"  - {note}" for note in r.annotations]

        lines += ["", "result: " + ("PASS" if r.passed else "FAIL")]
        return "\n".join(lines) + "\n"

    # ==================== 概率分布 ====================

    def distribution(self, d: DistributionReport) -> str:
        if self.fmt == "json":
            return self._json(d)
        header = [f"t{t}" for t in d.times]
        width = max([len(h) for h in header] + [len(m) for row in d.rows for m in row.outcomes] + [2]) + 2
        lines = [f"process: {d.name}", "".join(h.ljust(width) for h in header) + "probability"]
        for row in d.rows:
            lines.append("".join(m.ljust(width) for m in row.outcomes) + self._num(row.probability))
        lines.append(f"total: {self._num(d.total)}")
        return "\n".join(lines) + "\n"

    # ==================== 校验与错误 ====================

    def validation(self, v: ValidationReport) -> str:
        if self.fmt == "json":
            return self._json(v)
        status = "OK" if v.valid else "INVALID"
        lines = [f"{status} {v.name}: d={v.dimension}, n={v.times}"]
        lines.append(
            "hermitian kraus: " + ", ".join(f"t{i}={'yes' if h else 'no'}" for i, h in enumerate(v.hermitian_instruments, 1))
        )
        lines += [f"  {issue.component}: {issue.message} [{issue.code}]" for issue in v.issues]
        return "\n".join(lines) + "\n"

    def error(self, payload: dict[str, Any]) -> str:
        if self.fmt == "json":
            return self._json(payload)
        lines = [f"error [{payload['error_code']}]: {payload['error_message']}"]
        lines += [f"  - {d}" for d in payload.get("error_details", {}).get("diagnostics", [])]
        return "\n".join(lines) + "\n"


def emit_report(r: ClassicalityReport, fmt: str = "text", digits: int = 12) -> str:
    """ClassicalityReport -> 文本；fmt 为 'text' 或 'json'"""
    text = ReportEmitter(fmt, digits).report(r)
    log.debug(f"已生成 {r.process.name} 的 {fmt} 报告")
    return text
