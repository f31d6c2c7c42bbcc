"""
NCGD（不产生且不探测相干）判据

仅适用于所有时刻均为同一正交基上的秩一投影测量的过程。对相邻动力学对比较
⟨m_{i+1}| Λ_{i+1:i} ∘ Δ ∘ Λ_{i:i-1}[|m_{i-1}⟩⟨m_{i-1}|] |m_{i+1}⟩ 与去掉 Δ 后的同一量；
第一个时刻以初态 ρ 代替 Λ_{i:i-1}[|m_{i-1}⟩⟨m_{i-1}|]。
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from mtc.core.errors import DimensionMismatchError, NotFixedBasisProjectiveError, NotOrthonormalError
from mtc.core.log_manager import log
from mtc.core.opmat import DEFAULT_TOL, ComplexMatrix, projector
from mtc.core.process import Instrument, MarkovProcess, channel_apply
from mtc.models import CheckResult, ContextRecord


def _basis_vectors(dim: int, basis: Sequence[ArrayLike] | None, eps: float) -> list[NDArray[np.complex128]]:
    if basis is None:
        return list(np.eye(dim, dtype=np.complex128))
    vectors = [np.asarray(b, dtype=np.complex128).reshape(-1) for b in basis]
    if len(vectors) != dim or any(v.shape != (dim,) for v in vectors):
        raise DimensionMismatchError(f"基需要 {dim} 个 {dim} 维向量", {"dimension": dim, "count": len(vectors)})
    gram = np.array([[np.vdot(a, b) for b in vectors] for a in vectors])
    residual = float(np.linalg.norm(gram - np.eye(dim)))
    if residual > eps:
        log.error(f"给定的基不正交归一（残差 {residual:.3e}）")
        raise NotOrthonormalError(f"给定的基不正交归一（残差 {residual:.3e}）", {"residual": residual})
    return vectors


def dephasing_instrument(dim: int, basis: Sequence[ArrayLike] | None = None, eps: float = DEFAULT_TOL) -> Instrument:
    """完全退相干映射 Δ 对应的仪器 {|m⟩⟨m|}；basis 默认为计算基，标签为 "0".."d-1" """
    vectors = _basis_vectors(dim, basis, eps)
    return Instrument({str(k): projector(v) for k, v in enumerate(vectors)}, name="dephasing")


def _dephase(vectors: list[NDArray[np.complex128]], mat: ComplexMatrix) -> ComplexMatrix:
    out = np.zeros_like(mat)
    for v in vectors:
        out = out + np.vdot(v, mat @ v) * np.outer(v, v.conj())
    return out


def _assignments(p: MarkovProcess, vectors, eps: float) -> list[dict[str, int]]:
    assignments = []
    for i, ins in enumerate(p.instruments, start=1):
        assignment = ins.basis_assignment(vectors, eps)
        if assignment is None:
            raise NotFixedBasisProjectiveError(
                f"t{i} 的仪器不是给定基上的秩一投影测量",
                {"time": i, "instrument": ins.name},
            )
        assignments.append(assignment)
    return assignments


def ncgd_terms(
    p: MarkovProcess,
    i: int,
    previous: str | None,
    following: str,
    basis: Sequence[ArrayLike] | None = None,
    eps: float = DEFAULT_TOL,
) -> tuple[float, float]:
    """
    时刻 i 的 (含 Δ, 不含 Δ) 两侧数值
    :param previous: t_{i-1} 的结果标签；i = 1 时忽略（使用初态）
    :param following: t_{i+1} 的结果标签
    """
    vectors = _basis_vectors(p.dim, basis, eps)
    assignments = _assignments(p, vectors, eps)
    return _terms(p, vectors, assignments, i, previous, following)


def _terms(p, vectors, assignments, i, previous, following) -> tuple[float, float]:
    if i == 1:
        state = p.initial.mat
    else:
        prev_vec = vectors[assignments[i - 2][previous]]
        state = channel_apply(p.dynamic(i - 1).kraus, np.outer(prev_vec, prev_vec.conj()))
    next_vec = vectors[assignments[i][following]]
    after = p.dynamic(i).kraus
    with_dephasing = channel_apply(after, _dephase(vectors, state))
    without = channel_apply(after, state)
    lhs = float(np.vdot(next_vec, with_dephasing @ next_vec).real)
    rhs = float(np.vdot(next_vec, without @ next_vec).real)
    return lhs, rhs


def check_ncgd(
    p: MarkovProcess,
    basis: Sequence[ArrayLike] | None = None,
    eps: float = DEFAULT_TOL,
) -> CheckResult:
    """
    :param basis: 固定测量基（默认计算基）；任何时刻的仪器不是该基上的秩一投影测量时抛 NotFixedBasisProjectiveError
    """
    vectors = _basis_vectors(p.dim, basis, eps)
    assignments = _assignments(p, vectors, eps)

    records = []
    for i in range(1, p.n):
        previous_labels = [None] if i == 1 else list(p.outcomes(i - 1))
        for previous in previous_labels:
            for following in p.outcomes(i + 1):
                lhs, rhs = _terms(p, vectors, assignments, i, previous, following)
                records.append(ContextRecord(
                    time=i,
                    history=[] if previous is None else [(i - 1, previous)],
                    future=[(i + 1, following)],
                    residual=abs(lhs - rhs),
                    value=lhs - rhs,
                ))
    result = CheckResult.from_records("ncgd", eps, records)
    log.info(f"{p.name}: ncgd {'PASS' if result.passed else 'FAIL'} (max residual {result.max_residual:.3e})")
    return result
