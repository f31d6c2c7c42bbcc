"""
Pydantic Models
分析配置、校验报告、判据结果与经典性报告的数据模型，用于输入验证和报告序列化
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

# 判据名称（也是 check --tests 的可选值），顺序即报告中的输出顺序
CRITERIA = (
    "kolmogorov",
    "hierarchy",
    "commutators",
    "fixed_points",
    "weak",
    "absolute",
    "inclusion",
    "ncgd",
)

Context = list[tuple[int, str]]


# ==================== 配置模型 ====================


class AnalysisConfig(BaseModel):
    """分析配置模型"""
    model_config = ConfigDict(extra="forbid")

    tolerance: float = Field(default=1e-9, gt=0)
    degeneracy_tol: float = Field(default=1e-8, gt=0)
    rank_tol: float = Field(default=1e-9, gt=0)
    audit_tol: float | None = Field(default=None, gt=0)
    workers: int = Field(default=1, ge=1)
    probability_digits: int = Field(default=12, ge=1, le=17)
    tests: list[str] = Field(default_factory=lambda: list(CRITERIA))

    @model_validator(mode="after")
    def validate_tests(self) -> "AnalysisConfig":
        unknown = [t for t in self.tests if t not in CRITERIA]
        if unknown:
            raise ValueError(f"未知判据: {', '.join(unknown)}；可选: {', '.join(CRITERIA)}")
        if len(set(self.tests)) != len(self.tests):
            raise ValueError("tests 中存在重复判据")
        return self

    @property
    def effective_audit_tol(self) -> float:
        """蕴含审计使用的容差，未配置时取 sqrt(tolerance)"""
        if self.audit_tol is not None:
            return self.audit_tol
        return math.sqrt(self.tolerance)


# ==================== 过程校验模型 ====================


class ValidationIssue(BaseModel):
    """单条校验违规"""
    model_config = ConfigDict(extra="forbid")

    code: str
    component: str  # 如 "initial"、"dynamics[2:1]"、"instrument[t2]"
    message: str
    residual: float | None = None


class ValidationReport(BaseModel):
    """validate_process 的结果：违规列表 + 各时刻仪器 Kraus 算子的厄米性"""
    model_config = ConfigDict(extra="forbid")

    name: str
    dimension: int
    times: int
    issues: list[ValidationIssue] = Field(default_factory=list)
    hermitian_instruments: list[bool] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    @property
    def all_hermitian(self) -> bool:
        return all(self.hermitian_instruments)


# ==================== 判据结果模型 ====================


class ContextRecord(BaseModel):
    """单个上下文（时刻、历史、当前结果、未来）上的残差记录"""
    model_config = ConfigDict(extra="forbid")

    time: int
    history: Context = Field(default_factory=list)
    outcome: str | None = None
    future: Context = Field(default_factory=list)
    residual: float = Field(ge=0)
    value: float | None = None  # 取绝对值之前的带符号数值（若有定义）
    flags: list[str] = Field(default_factory=list)
    state_index: int | None = None  # 初态集合中的序号（仅在按初态集合评估时）


class CheckResult(BaseModel):
    """单个判据的结果"""
    model_config = ConfigDict(extra="forbid")

    criterion: str
    tolerance: float
    applicable: bool = True
    passed: bool
    max_residual: float = Field(ge=0)
    records: list[ContextRecord] = Field(default_factory=list)
    flags: list[str] = Field(default_factory=list)
    summary: dict[str, float] = Field(default_factory=dict)
    reason: str | None = None  # 不适用时的原因

    @model_validator(mode="after")
    def validate_verdict(self) -> "CheckResult":
        if self.applicable and self.passed != (self.max_residual < self.tolerance):
            raise ValueError("判据结论与 max_residual/tolerance 不一致")
        return self

    @classmethod
    def from_records(
        cls,
        criterion: str,
        tolerance: float,
        records: list[ContextRecord],
        summary: dict[str, float] | None = None,
        extra_flags: list[str] | None = None,
    ) -> "CheckResult":
        max_residual = max((r.residual for r in records), default=0.0)
        flags: list[str] = []
        for flag in [f for r in records for f in r.flags] + list(extra_flags or []):
            if flag not in flags:
                flags.append(flag)
        return cls(
            criterion=criterion,
            tolerance=tolerance,
            passed=max_residual < tolerance,
            max_residual=max_residual,
            records=records,
            flags=flags,
            summary=summary or {},
        )

    @classmethod
    def not_applicable(cls, criterion: str, tolerance: float, reason: str) -> "CheckResult":
        return cls(
            criterion=criterion,
            tolerance=tolerance,
            applicable=False,
            passed=False,
            max_residual=0.0,
            reason=reason,
        )

    def at_time(self, time: int) -> list[ContextRecord]:
        return [r for r in self.records if r.time == time]

    def max_at(self, time: int) -> float:
        return max((r.residual for r in self.at_time(time)), default=0.0)


class LuedersResult(BaseModel):
    """单个仪器与单个效应算子 Q 的不动点/对易性比较"""
    model_config = ConfigDict(extra="forbid")

    fixed_point: bool
    commuting: bool
    fixed_point_residual: float
    commutator_residuals: dict[str, float]
    all_hermitian: bool
    agreement: bool | None = None  # 仅当全部 Kraus 厄米时有定义


# ==================== 经典性报告模型 ====================


class AuditEntry(BaseModel):
    """判据之间的一条蕴含关系审计"""
    model_config = ConfigDict(extra="forbid")

    rule: str
    time: int | None = None
    status: Literal["holds", "violated", "skipped"]
    reason: str | None = None


class ProcessMetadata(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    description: str = ""
    dimension: int
    times: int
    outcomes: list[list[str]]
    hermitian_instruments: list[bool]


class ClassicalityReport(BaseModel):
    """analyze 的完整输出"""
    model_config = ConfigDict(extra="forbid")

    process: ProcessMetadata
    tolerance: float
    audit_tolerance: float
    results: dict[str, CheckResult]
    audit: list[AuditEntry] = Field(default_factory=list)
    annotations: list[str] = Field(default_factory=list)

    @property
    def violations(self) -> list[AuditEntry]:
        return [a for a in self.audit if a.status == "violated"]

    @property
    def passed(self) -> bool:
        """所有适用判据均通过"""
        return all(r.passed for r in self.results.values() if r.applicable)


# ==================== 统计输出模型 ====================


class DistributionRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    outcomes: list[str]
    probability: float


class DistributionReport(BaseModel):
    """probs 命令输出"""
    model_config = ConfigDict(extra="forbid")

    name: str
    times: list[int]
    rows: list[DistributionRow]
    total: float
