# @time:    2026-03-02
"""
马尔可夫多时刻过程的数据模型与校验

初态 ρ、相邻时刻之间的 CPTP 映射 Λ_{i+1:i}（Kraus 集合）、每个时刻的仪器 𝒥_i（每个结果一个 Kraus 算子）。
构造时只检查结构（形状、有限性、维度、长度）；完备性、正定性等数值条件由 validate_process 统一报告。
时刻下标从 1 开始。
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from mtc.core.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidSequenceError,
    InvalidTimeError,
    UnknownOutcomeError,
)
from mtc.core.log_manager import log
from mtc.core.opmat import (
    DEFAULT_TOL,
    ComplexMatrix,
    as_matrix,
    hs_norm,
    identity,
    is_hermitian,
    projector,
)
from mtc.models import ValidationIssue, ValidationReport


# ==================== 态 ====================


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """密度矩阵；normalized=False 表示次归一化态（迹即概率）"""
    mat: ComplexMatrix
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mat", as_matrix(self.mat, "density matrix"))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    @classmethod
    def pure(cls, vector: ArrayLike) -> "DensityMatrix":
        vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise EmptyInputError("纯态向量不能为零向量")
        return cls(projector(vec / norm))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(identity(d) / d)

    def issues(self, tol: float = DEFAULT_TOL) -> list[str]:
        """违反的不变量（空列表表示合法）"""
        problems = []
        if not is_hermitian(self.mat, tol):
            problems.append("not Hermitian")
            return problems
        min_eig = float(linalg.eigvalsh((self.mat + self.mat.conj().T) / 2).min())
        if min_eig < -tol:
            problems.append(f"not positive semidefinite (min eigenvalue {min_eig:.3e})")
        tr = self.trace
        if self.normalized and abs(tr - 1.0) > tol:
            problems.append(f"trace {tr:.12g} != 1")
        if not self.normalized and not (-tol <= tr <= 1.0 + tol):
            problems.append(f"trace {tr:.12g} outside [0, 1]")
        return problems


# ==================== CPTP 映射与仪器 ====================


def _check_common_dim(mats: Sequence[ComplexMatrix], what: str) -> int:
    d = mats[0].shape[0]
    for k, m in enumerate(mats):
        if m.shape[0] != d:
            raise DimensionMismatchError(
                f"{what}: 第 {k + 1} 个算子维度 {m.shape[0]} 与 {d} 不一致",
                {"component": what, "expected": d, "actual": m.shape[0]},
            )
    return d


def channel_apply(ops: Iterable[ComplexMatrix], mat: ComplexMatrix) -> ComplexMatrix:
    """Σ_ℓ L ρ L†"""
    return sum((k @ mat @ k.conj().T for k in ops), np.zeros_like(mat))


def channel_adjoint(ops: Iterable[ComplexMatrix], mat: ComplexMatrix) -> ComplexMatrix:
    """Σ_ℓ L† Q L"""
    return sum((k.conj().T @ mat @ k for k in ops), np.zeros_like(mat))


def _completeness_residual(ops: Iterable[ComplexMatrix], d: int) -> float:
    return hs_norm(channel_adjoint(ops, np.eye(d, dtype=np.complex128)) - np.eye(d))


@dataclass(frozen=True, eq=False)
class KrausSet:
    """CPTP 映射 Λ[•] = Σ_ℓ L^{(ℓ)} • L^{(ℓ)†}"""
    kraus: tuple[ComplexMatrix, ...]
    name: str = ""

    def __post_init__(self):
        ops = tuple(as_matrix(k, f"{self.name or 'kraus'}[{i}]") for i, k in enumerate(self.kraus))
        if not ops:
            raise EmptyInputError(f"Kraus 集合 {self.name!r} 不能为空")
        _check_common_dim(ops, self.name or "kraus set")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @classmethod
    def identity(cls, d: int) -> "KrausSet":
        return cls((identity(d),), name="identity")

    @classmethod
    def unitary(cls, u: ArrayLike, name: str = "unitary") -> "KrausSet":
        return cls((as_matrix(u, name),), name=name)

    def completeness_residual(self) -> float:
        return _completeness_residual(self.kraus, self.dim)


@dataclass(frozen=True, eq=False)
class Instrument:
    """仪器：有序的 结果标签 -> 单个 Kraus 算子"""
    elements: Mapping[str, ComplexMatrix]
    name: str = ""

    def __post_init__(self):
        if isinstance(self.elements, Mapping):
            items = list(self.elements.items())
        else:
            items = list(self.elements)
        if not items:
            raise EmptyInputError(f"仪器 {self.name!r} 至少需要一个结果")
        converted = {}
        for label, k in items:
            if not isinstance(label, str) or not label:
                raise InvalidSequenceError(f"仪器 {self.name!r} 的结果标签必须是非空字符串: {label!r}")
            if label in converted:
                raise InvalidSequenceError(f"仪器 {self.name!r} 的结果标签重复: {label}")
            converted[label] = as_matrix(k, f"{self.name or 'instrument'}[{label}]")
        _check_common_dim(list(converted.values()), self.name or "instrument")
        object.__setattr__(self, "elements", MappingProxyType(converted))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.elements)

    @property
    def dim(self) -> int:
        return next(iter(self.elements.values())).shape[0]

    def kraus(self, label: str) -> ComplexMatrix:
        try:
            return self.elements[label]
        except KeyError:
            raise UnknownOutcomeError(
                f"仪器 {self.name!r} 没有结果 {label!r}，可选 {list(self.labels)}",
                {"instrument": self.name, "label": label},
            ) from None

    @classmethod
    def projective(
        cls,
        vectors: Sequence[ArrayLike],
        labels: Sequence[str] | None = None,
        name: str = "",
    ) -> "Instrument":
        """秩一投影测量 {|v⟩⟨v|}，标签默认为 "0", "1", ..."""
        labels = list(labels) if labels is not None else [str(k) for k in range(len(vectors))]
        if len(labels) != len(vectors):
            raise InvalidSequenceError("标签数与向量数不一致")
        return cls({lab: projector(v) for lab, v in zip(labels, vectors)}, name=name)

    @classmethod
    def trivial(cls, d: int) -> "Instrument":
        """不做测量：单一结果，Kraus 为恒等"""
        return cls({"*": identity(d)}, name="trivial")

    def completeness_residual(self) -> float:
        return _completeness_residual(self.elements.values(), self.dim)

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return all(is_hermitian(k, tol) for k in self.elements.values())

    def basis_assignment(self, basis: Sequence[ArrayLike], tol: float = DEFAULT_TOL) -> dict[str, int] | None:
        """
        若仪器恰为给定正交基上的秩一投影测量，返回 标签 -> 基矢下标，否则返回 None
        """
        if len(basis) != len(self.elements):
            return None
        projs = [projector(b) for b in basis]
        assignment: dict[str, int] = {}
        for label, k in self.elements.items():
            match = [j for j, p in enumerate(projs) if hs_norm(k - p) < tol]
            if len(match) != 1 or match[0] in assignment.values():
                return None
            assignment[label] = match[0]
        return assignment


# ==================== 过程 ====================


@dataclass(frozen=True)
class OutcomeSequence:
    """(时刻, 结果标签) 的有序序列，时刻严格递增"""
    outcomes: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(t), str(m)) for t, m in self.outcomes)
        times = [t for t, _ in pairs]
        if any(t < 1 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidSequenceError(f"时刻必须从 1 开始且严格递增: {times}", {"times": times})
        object.__setattr__(self, "outcomes", pairs)

    @classmethod
    def consecutive(cls, labels: Sequence[str], start: int = 1) -> "OutcomeSequence":
        """从 start 开始的连续时刻"""
        return cls(tuple((start + k, lab) for k, lab in enumerate(labels)))

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.outcomes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m for _, m in self.outcomes)

    def as_list(self) -> list[tuple[int, str]]:
        return list(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self.outcomes)

    def __add__(self, other: "OutcomeSequence") -> "OutcomeSequence":
        return OutcomeSequence(self.outcomes + other.outcomes)

    def __str__(self) -> str:
        return ", ".join(f"t{t}={m}" for t, m in self.outcomes) or "∅"


@dataclass(frozen=True, eq=False)
class MarkovProcess:
    """
    马尔可夫多时刻过程：
    ρ -> 𝒥_1 -> Λ_{2:1} -> 𝒥_2 -> ... -> Λ_{n:n-1} -> 𝒥_n
    """
    initial: DensityMatrix
    dynamics: tuple[KrausSet, ...]
    instruments: tuple[Instrument, ...]
    name: str = "process"
    description: str = ""

    def __post_init__(self):
        dynamics = tuple(self.dynamics)
        instruments = tuple(self.instruments)
        if not instruments:
            raise EmptyInputError("过程至少需要一个测量时刻")
        if len(dynamics) != len(instruments) - 1:
            raise InvalidSequenceError(
                f"动力学数目 {len(dynamics)} 必须等于仪器数目 {len(instruments)} 减一",
                {"dynamics": len(dynamics), "instruments": len(instruments)},
            )
        d = self.initial.dim
        for what, comp in [(f"dynamics[{i + 2}:{i + 1}]", dy) for i, dy in enumerate(dynamics)] + [
            (f"instrument[t{i + 1}]", ins) for i, ins in enumerate(instruments)
        ]:
            if comp.dim != d:
                raise DimensionMismatchError(
                    f"{what} 维度 {comp.dim} 与初态维度 {d} 不一致",
                    {"component": what, "expected": d, "actual": comp.dim},
                )
        object.__setattr__(self, "dynamics", dynamics)
        object.__setattr__(self, "instruments", instruments)

    @property
    def dim(self) -> int:
        return self.initial.dim

    @property
    def n(self) -> int:
        """测量时刻数"""
        return len(self.instruments)

    def check_time(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise InvalidTimeError(f"时刻 {i} 超出范围 1..{self.n}", {"time": i, "times": self.n})

    def instrument(self, i: int) -> Instrument:
        self.check_time(i)
        return self.instruments[i - 1]

    def dynamic(self, i: int) -> KrausSet:
        """Λ_{i+1:i}，i ∈ 1..n-1"""
        if not 1 <= i < self.n:
            raise InvalidTimeError(f"不存在 Λ_{{{i + 1}:{i}}}（n={self.n}）", {"time": i})
        return self.dynamics[i - 1]

    def outcomes(self, i: int) -> tuple[str, ...]:
        return self.instrument(i).labels

    def check_sequence(self, seq: OutcomeSequence) -> None:
        """每个 (时刻, 标签) 都必须存在"""
        for t, label in seq:
            self.instrument(t).kraus(label)

    def with_initial(self, rho: DensityMatrix) -> "MarkovProcess":
        return MarkovProcess(rho, self.dynamics, self.instruments, self.name, self.description)

    def truncated(self, k: int) -> "MarkovProcess":
        """只保留时刻 1..k"""
        self.check_time(k)
        return MarkovProcess(
            self.initial,
            self.dynamics[: k - 1],
            self.instruments[:k],
            f"{self.name}[1..{k}]",
            self.description,
        )


# ==================== 映射作用 ====================


def apply_map(channel: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    if channel.dim != rho.dim:
        raise DimensionMismatchError(f"apply_map: Kraus 维度 {channel.dim} 与态维度 {rho.dim} 不一致")
    return DensityMatrix(channel_apply(channel.kraus, rho.mat), normalized=rho.normalized)


def apply_adjoint_map(channel: KrausSet, q: ArrayLike) -> ComplexMatrix:
    q = as_matrix(q, "Q")
    if channel.dim != q.shape[0]:
        raise DimensionMismatchError(f"apply_adjoint_map: Kraus 维度 {channel.dim} 与算子维度 {q.shape[0]} 不一致")
    return as_matrix(channel_adjoint(channel.kraus, q))


def instrument_total_adjoint(instrument: Instrument, q: ArrayLike) -> ComplexMatrix:
    """𝒦†[Q] = Σ_m K^{(m)†} Q K^{(m)}"""
    q = as_matrix(q, "Q")
    if instrument.dim != q.shape[0]:
        raise DimensionMismatchError(
            f"instrument_total_adjoint: 仪器维度 {instrument.dim} 与算子维度 {q.shape[0]} 不一致"
        )
    return as_matrix(channel_adjoint(instrument.elements.values(), q))


def operator_basis_states(d: int) -> list[DensityMatrix]:
    """
    张成全部厄米算子的 d² 个纯态：
    |k⟩⟨k|，½(|k⟩+|l⟩)(⟨k|+⟨l|)，½(|k⟩+i|l⟩)(⟨k|−i⟨l|)，k<l
    """
    eye = np.eye(d, dtype=np.complex128)
    states = [DensityMatrix(projector(eye[k])) for k in range(d)]
    for k in range(d):
        for l in range(k + 1, d):
            states.append(DensityMatrix.pure(eye[k] + eye[l]))
            states.append(DensityMatrix.pure(eye[k] + 1j * eye[l]))
    return states


# ==================== 校验 ====================


def validate_process(p: MarkovProcess, eps: float = DEFAULT_TOL) -> ValidationReport:
    """
    校验初态、各 CPTP 映射的完备性、各仪器的完备性，并报告各时刻仪器 Kraus 算子是否厄米。
    不抛异常，违规全部记录在报告中。
    """
    issues: list[ValidationIssue] = []

    for problem in p.initial.issues(eps):
        issues.append(ValidationIssue(code="BAD_STATE", component="initial", message=f"initial state {problem}"))

    for i, channel in enumerate(p.dynamics, start=1):
        residual = channel.completeness_residual()
        if residual > eps:
            issues.append(ValidationIssue(
                code="NOT_CPTP",
                component=f"dynamics[{i + 1}:{i}]" + (f" ({channel.name})" if channel.name else ""),
                message=f"Σ L†L != identity (residual {residual:.3e})",
                residual=residual,
            ))

    hermitian = []
    for i, ins in enumerate(p.instruments, start=1):
        residual = ins.completeness_residual()
        if residual > eps:
            issues.append(ValidationIssue(
                code="INCOMPLETE_INSTRUMENT",
                component=f"instrument[t{i}]" + (f" ({ins.name})" if ins.name else ""),
                message=f"Σ K†K != identity (residual {residual:.3e})",
                residual=residual,
            ))
        hermitian.append(ins.is_hermitian(eps))

    report = ValidationReport(
        name=p.name,
        dimension=p.dim,
        times=p.n,
        issues=issues,
        hermitian_instruments=hermitian,
    )
    if issues:
        log.warning(f"过程 {p.name} 校验失败: {len(issues)} 项违规")
    else:
        log.debug(f"过程 {p.name} 校验通过，厄米性: {hermitian}")
    return report
