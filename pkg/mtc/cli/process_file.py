"""
过程描述文件（JSON）

复数写作 [re, im] 或实数；矩阵为按行嵌套的数组，或命名简写
（identity / zero / hadamard / sigma_x / sigma_y / sigma_z / proj:k / proj:+ / proj:- / proj:+i / proj:-i），
或 {"scale": c, "matrix": 矩阵}。格式说明见 docs/process_file_spec.md。
解析时收集全部问题后一次性抛出 ProcessFileError。
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from mtc.cli.utils import format_validation_error
from mtc.core.config_manager import ConfigManager
from mtc.core.errors import MtcError, MultiKrausElementError, ProcessFileError
from mtc.core.log_manager import log
from mtc.core.opmat import QUBIT_STATES, hadamard, identity, pauli, zeros
from mtc.core.process import (
    DensityMatrix,
    Instrument,
    KrausSet,
    MarkovProcess,
    validate_process,
)


# ==================== 文件结构模型 ====================


class DynamicsModel(BaseModel):
    """相邻时刻之间的 CPTP 映射"""
    model_config = ConfigDict(extra="forbid")

    name: str = ""
    kraus: list[Any] = Field(min_length=1)


class InstrumentModel(BaseModel):
    """仪器：结果标签 -> 单个 Kraus 矩阵"""
    model_config = ConfigDict(extra="forbid")

    name: str = ""
    elements: dict[str, Any] = Field(min_length=1)


class ProcessFileModel(BaseModel):
    """过程描述文件模型"""
    model_config = ConfigDict(extra="forbid")

    name: str = "process"
    description: str = ""
    dimension: int = Field(ge=1)
    initial_state: Any
    dynamics: list[DynamicsModel] = Field(default_factory=list)
    instruments: list[InstrumentModel] = Field(min_length=1)
    initial_set: list[Any] | None = None
    fixed_basis: str | list[Any] | None = None
    annotations: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_lengths(self) -> "ProcessFileModel":
        if len(self.dynamics) != len(self.instruments) - 1:
            raise ValueError(
                f"dynamics 数目 {len(self.dynamics)} 必须等于 instruments 数目 {len(self.instruments)} 减一"
            )
        return self


@dataclass
class ProcessDocument:
    """解析结果：过程本身 + 可选的初态集合、固定基与注记"""
    process: MarkovProcess
    initial_set: list[DensityMatrix] | None = None
    basis: list[NDArray[np.complex128]] | None = None
    annotations: list[str] = field(default_factory=list)


# ==================== 矩阵解析 ====================


def _entry(value: Any) -> complex:
    if isinstance(value, bool):
        raise ValueError(f"非法矩阵元素: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ValueError(f"非法矩阵元素: {value!r}（应为实数或 [re, im]）")


def _named_matrix(name: str, d: int) -> NDArray[np.complex128]:
    if name == "identity":
        return np.array(identity(d))
    if name == "zero":
        return np.array(zeros(d))
    if name == "hadamard":
        return np.array(hadamard())
    if name.startswith("sigma_"):
        return np.array(pauli(name))
    if name.startswith("proj:"):
        vec = _named_vector(name.removeprefix("proj:"), d)
        return np.outer(vec, vec.conj())
    raise ValueError(f"未知矩阵简写: {name!r}")


def _named_vector(label: str, d: int) -> NDArray[np.complex128]:
    if label in QUBIT_STATES and not label.isdigit():
        if d != 2:
            raise ValueError(f"命名态 {label!r} 只适用于 d=2（当前 d={d}）")
        return np.array(QUBIT_STATES[label], dtype=np.complex128)
    if label.isdigit() and int(label) < d:
        vec = np.zeros(d, dtype=np.complex128)
        vec[int(label)] = 1.0
        return vec
    raise ValueError(f"未知基矢: {label!r}")


def parse_matrix(raw: Any, d: int) -> NDArray[np.complex128]:
    """矩阵规格 -> d×d 复矩阵；形状不符时抛 ValueError"""
    if isinstance(raw, str):
        mat = _named_matrix(raw, d)
    elif isinstance(raw, dict):
        if "kraus" in raw:
            raise MultiKrausElementError("仪器元素只能有一个 Kraus 算子")
        unknown = set(raw) - {"scale", "matrix"}
        if unknown or "matrix" not in raw:
            raise ValueError(f"矩阵对象只接受 scale/matrix 字段，实际为 {sorted(raw)}")
        mat = _entry(raw.get("scale", 1.0)) * parse_matrix(raw["matrix"], d)
    elif isinstance(raw, list):
        if not all(isinstance(row, list) for row in raw):
            raise ValueError("矩阵必须是按行嵌套的数组")
        lengths = {len(row) for row in raw}
        if len(lengths) > 1:
            raise ValueError("矩阵各行长度不一致")
        mat = np.array([[_entry(v) for v in row] for row in raw], dtype=np.complex128).reshape(len(raw), -1)
    else:
        raise ValueError(f"无法识别的矩阵规格: {raw!r}")
    if mat.shape != (d, d):
        raise ValueError(f"期望 {d}x{d} 矩阵，实际为 {mat.shape[0]}x{mat.shape[1] if mat.ndim == 2 else '?'}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("矩阵含有 NaN 或 Inf")
    return mat


def parse_vector(raw: Any, d: int) -> NDArray[np.complex128]:
    if isinstance(raw, str):
        return _named_vector(raw, d)
    if isinstance(raw, list):
        vec = np.array([_entry(v) for v in raw], dtype=np.complex128)
        if vec.shape != (d,):
            raise ValueError(f"期望 {d} 维向量，实际为 {len(raw)} 维")
        return vec
    raise ValueError(f"无法识别的向量规格: {raw!r}")


def parse_state(raw: Any, d: int) -> DensityMatrix:
    """态规格：命名纯态 / "maximally_mixed" / {"vector": ...} / {"matrix": ...}"""
    if raw == "maximally_mixed":
        return DensityMatrix.maximally_mixed(d)
    if isinstance(raw, str):
        return DensityMatrix.pure(_named_vector(raw, d))
    if isinstance(raw, dict) and set(raw) == {"vector"}:
        return DensityMatrix.pure(parse_vector(raw["vector"], d))
    if isinstance(raw, dict) and set(raw) == {"matrix"}:
        return DensityMatrix(parse_matrix(raw["matrix"], d))
    raise ValueError(f"无法识别的态规格: {raw!r}")


# ==================== 解析与序列化 ====================


def _collect(diagnostics: list[str], where: str, fn, *args):
    try:
        return fn(*args)
    except MultiKrausElementError as e:
        diagnostics.append(f"{where}: {e.message} [{e.error_code}]")
    except (ValueError, MtcError) as e:
        diagnostics.append(f"{where}: {e}")
    return None


def load_document(text: str, eps: float | None = None) -> ProcessDocument:
    """
    解析过程描述文件
    :param eps: 校验容差，默认取配置中的 tolerance
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        log.error(f"过程描述文件 JSON 语法错误: {e}")
        raise ProcessFileError("JSON 语法错误", [f"line {e.lineno} column {e.colno}: {e.msg}"])

    try:
        doc = ProcessFileModel.model_validate(raw)
    except ValidationError as e:
        diagnostics = format_validation_error(e)
        log.error(f"过程描述文件结构错误: {diagnostics}")
        raise ProcessFileError("过程描述文件结构错误", diagnostics)

    d = doc.dimension
    diagnostics: list[str] = []
    initial = _collect(diagnostics, "initial_state", parse_state, doc.initial_state, d)

    dynamics = []
    for i, dyn in enumerate(doc.dynamics, start=1):
        label = f"dynamics[{i + 1}:{i}]" + (f" ({dyn.name})" if dyn.name else "")
        ops = [_collect(diagnostics, f"{label} kraus[{k}]", parse_matrix, raw, d) for k, raw in enumerate(dyn.kraus)]
        dynamics.append((dyn.name, ops))

    instruments = []
    for i, ins in enumerate(doc.instruments, start=1):
        label = f"instrument[t{i}]" + (f" ({ins.name})" if ins.name else "")
        elements = {
            outcome: _collect(diagnostics, f"{label} element {outcome!r}", parse_matrix, raw, d)
            for outcome, raw in ins.elements.items()
        }
        if "" in elements:
            diagnostics.append(f"{label}: 结果标签不能为空字符串")
        instruments.append((ins.name, elements))

    initial_set = None
    if doc.initial_set is not None:
        initial_set = [
            _collect(diagnostics, f"initial_set[{k}]", parse_state, raw, d) for k, raw in enumerate(doc.initial_set)
        ]
        if not initial_set:
            diagnostics.append("initial_set: 不能为空")

    basis = None
    if isinstance(doc.fixed_basis, str):
        if doc.fixed_basis != "computational":
            diagnostics.append(f"fixed_basis: 未知的基名称 {doc.fixed_basis!r}")
        else:
            basis = list(np.eye(d, dtype=np.complex128))
    elif doc.fixed_basis is not None:
        basis = [_collect(diagnostics, f"fixed_basis[{k}]", parse_vector, v, d) for k, v in enumerate(doc.fixed_basis)]

    if diagnostics:
        log.error(f"过程描述文件 {doc.name} 存在 {len(diagnostics)} 处问题")
        raise ProcessFileError(f"过程描述文件 {doc.name} 无效", diagnostics)

    process = MarkovProcess(
        initial=initial,
        dynamics=tuple(KrausSet(tuple(ops), name=name) for name, ops in dynamics),
        instruments=tuple(Instrument(elements, name=name) for name, elements in instruments),
        name=doc.name,
        description=doc.description,
    )
    tol = eps if eps is not None else ConfigManager.load_config().tolerance
    report = validate_process(process, tol)
    diagnostics = [f"{issue.component}: {issue.message} [{issue.code}]" for issue in report.issues]
    for k, rho in enumerate(initial_set or []):
        diagnostics.extend(f"initial_set[{k}]: {problem}" for problem in rho.issues(tol))
    if diagnostics:
        log.error(f"过程 {doc.name} 校验失败: {diagnostics}")
        raise ProcessFileError(f"过程 {doc.name} 未通过校验", diagnostics)

    log.debug(f"已解析过程 {doc.name}: d={d}, n={process.n}")
    return ProcessDocument(process=process, initial_set=initial_set, basis=basis, annotations=list(doc.annotations))


def parse_process(text: str, eps: float | None = None) -> MarkovProcess:
    return load_document(text, eps).process


def read_process_file(path: str | Path, eps: float | None = None) -> ProcessDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        log.error(f"无法读取过程描述文件 {path}: {e}")
        raise ProcessFileError(f"无法读取过程描述文件 {path}", [str(e)])
    return load_document(text, eps)


def _encode_matrix(mat: ArrayLike) -> list[list[list[float]]]:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(mat)]


def _encode_vector(vec: ArrayLike) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(vec).reshape(-1)]


def serialize_process(
    p: MarkovProcess,
    initial_set: Sequence[DensityMatrix] | None = None,
    basis: Sequence[ArrayLike] | None = None,
    annotations: Sequence[str] | None = None,
) -> str:
    """MarkovProcess -> 过程描述文件文本（load_document 的逆操作，全部矩阵显式写出）"""
    doc: dict[str, Any] = {
        "name": p.name,
        "description": p.description,
        "dimension": p.dim,
        "initial_state": {"matrix": _encode_matrix(p.initial.mat)},
        "dynamics": [
            {"name": dyn.name, "kraus": [_encode_matrix(k) for k in dyn.kraus]} for dyn in p.dynamics
        ],
        "instruments": [
            {"name": ins.name, "elements": {label: _encode_matrix(k) for label, k in ins.elements.items()}}
            for ins in p.instruments
        ],
    }
    if initial_set is not None:
        doc["initial_set"] = [{"matrix": _encode_matrix(rho.mat)} for rho in initial_set]
    if basis is not None:
        doc["fixed_basis"] = [_encode_vector(v) for v in basis]
    if annotations:
        doc["annotations"] = list(annotations)
    return json.dumps(doc, indent=2, ensure_ascii=False)
