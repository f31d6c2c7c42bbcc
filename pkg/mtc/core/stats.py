# @time:    2026-03-02
"""
多时刻统计引擎

- joint_prob：量子回归公式，按时间顺序逐步更新密度矩阵
- full_distribution：对测量时刻子集的联合分布（未测量时刻不插入 Kraus，但动力学照常作用）
- pre_measurement_state / post_measurement_operator：ρ̃_i(历史) 与 Q_i(未来)
- split_prob：tr[ρ̃_i K† Q_i K]，在任意分割点都应等于 joint_prob
- kraus_path_probability：对动力学 Kraus 指标逐路径求和的朴素实现，仅用作差分测试的对照
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from mtc.core.errors import InvalidSequenceError, InvalidTimeError
from mtc.core.log_manager import log
from mtc.core.opmat import DEFAULT_TOL, ComplexMatrix, as_matrix
from mtc.core.process import (
    DensityMatrix,
    MarkovProcess,
    OutcomeSequence,
    channel_adjoint,
    channel_apply,
)


# ==================== 数据类型 ====================


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """测量时刻 times 上的联合分布，table 按字典序（仪器声明顺序）排列"""
    times: tuple[int, ...]
    outcomes: tuple[tuple[str, ...], ...]
    table: Mapping[tuple[str, ...], float]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(self.times))
        object.__setattr__(self, "outcomes", tuple(tuple(o) for o in self.outcomes))
        table = {tuple(k): float(v) for k, v in dict(self.table).items()}
        for key in table:
            if len(key) != len(self.times):
                raise InvalidSequenceError(f"分布表键 {key} 与测量时刻 {self.times} 长度不一致")
        object.__setattr__(self, "table", MappingProxyType(table))

    def probability(self, labels: Sequence[str] | Mapping[int, str]) -> float:
        """按标签元组或 {时刻: 标签} 查询"""
        if isinstance(labels, Mapping):
            labels = tuple(labels[t] for t in self.times)
        key = tuple(labels)
        if key not in self.table:
            raise InvalidSequenceError(f"分布中不存在结果 {key}（时刻 {self.times}）")
        return self.table[key]

    def total(self) -> float:
        return float(sum(self.table.values()))

    def clamped(self) -> "JointDistribution":
        """概率截断到 [0, 1]，仅用于展示"""
        return JointDistribution(
            self.times,
            self.outcomes,
            {k: min(1.0, max(0.0, v)) for k, v in self.table.items()},
        )

    def items(self):
        return self.table.items()

    def __len__(self) -> int:
        return len(self.table)


@dataclass(frozen=True, eq=False)
class ConditionedState:
    """ρ̃_i(𝐦_{i-1:1})：时刻 i 测量前的次归一化态，迹为历史的概率"""
    time: int
    history: OutcomeSequence
    state: DensityMatrix

    @property
    def probability(self) -> float:
        return self.state.trace


@dataclass(frozen=True, eq=False)
class PostOperator:
    """Q_i(𝐦_{n:i+1})：未来结果序列回溯到时刻 i 的效应算子"""
    time: int
    future: OutcomeSequence
    op: ComplexMatrix


# ==================== 枚举 ====================


def _sequences(p: MarkovProcess, times: Iterable[int]) -> list[OutcomeSequence]:
    times = list(times)
    for t in times:
        p.check_time(t)
    label_lists = [p.outcomes(t) for t in times]
    return [OutcomeSequence(tuple(zip(times, combo))) for combo in itertools.product(*label_lists)]


def histories(p: MarkovProcess, i: int) -> list[OutcomeSequence]:
    """时刻 1..i-1 的全部结果序列（字典序）；i=1 时为单个空序列"""
    p.check_time(i)
    return _sequences(p, range(1, i))


def futures(p: MarkovProcess, i: int) -> list[OutcomeSequence]:
    """时刻 i+1..n 的全部结果序列（字典序）；i=n 时为单个空序列"""
    p.check_time(i)
    return _sequences(p, range(i + 1, p.n + 1))


def _require_times(seq: OutcomeSequence, expected: Sequence[int], what: str) -> None:
    if tuple(seq.times) != tuple(expected):
        log.error(f"{what} 覆盖的时刻 {seq.times} 与期望 {tuple(expected)} 不一致")
        raise InvalidSequenceError(
            f"{what} 必须恰好覆盖时刻 {list(expected)}，实际为 {list(seq.times)}",
            {"expected": list(expected), "actual": list(seq.times)},
        )


# ==================== 前向/后向递推 ====================


def _advance(p: MarkovProcess, mat: ComplexMatrix, start: int, stop: int) -> ComplexMatrix:
    """从时刻 start 的测量后演化到时刻 stop 的测量前"""
    for j in range(start, stop):
        mat = channel_apply(p.dynamic(j).kraus, mat)
    return mat


def _evolve(p: MarkovProcess, seq: OutcomeSequence, stop: int) -> ComplexMatrix:
    """
    从 ρ 出发依次作用测量与动力学，返回时刻 stop 测量前的（次归一化）矩阵；
    seq 中未出现的时刻不插入 Kraus。
    """
    mat = p.initial.mat
    current = 1
    for t, label in seq:
        if t >= stop:
            break
        mat = _advance(p, mat, current, t)
        k = p.instrument(t).kraus(label)
        mat = k @ mat @ k.conj().T
        current = t
    return _advance(p, mat, current, stop)


def sequence_prob(p: MarkovProcess, seq: OutcomeSequence) -> float:
    """任意测量时刻子集上的结果概率（其余时刻不测量；最后一次测量之后的动力学保迹，无需作用）"""
    p.check_sequence(seq)
    mat = p.initial.mat
    current = 1
    for t, label in seq:
        mat = _advance(p, mat, current, t)
        k = p.instrument(t).kraus(label)
        mat = k @ mat @ k.conj().T
        current = t
    return float(np.trace(mat).real)


def joint_prob(p: MarkovProcess, seq: OutcomeSequence) -> float:
    """
    量子回归公式：tr(𝒦_n ∘ Λ_{n:n-1} ∘ … ∘ 𝒦_1[ρ])
    :param seq: 覆盖全部时刻 1..n 的结果序列
    """
    _require_times(seq, range(1, p.n + 1), "joint_prob 的结果序列")
    return sequence_prob(p, seq)


def pre_measurement_state(p: MarkovProcess, i: int, history: OutcomeSequence) -> ConditionedState:
    """ρ̃_i(𝐦_{i-1:1})，ρ̃_1 = ρ"""
    p.check_time(i)
    _require_times(history, range(1, i), f"时刻 {i} 的历史")
    p.check_sequence(history)
    mat = _evolve(p, history, i)
    return ConditionedState(time=i, history=history, state=DensityMatrix(mat, normalized=False))


def _post_operator_matrix(p: MarkovProcess, i: int, future: OutcomeSequence) -> ComplexMatrix:
    q = np.eye(p.dim, dtype=np.complex128)
    for t, label in reversed(future.outcomes):
        k = p.instrument(t).kraus(label)
        q = k.conj().T @ q @ k
        q = channel_adjoint(p.dynamic(t - 1).kraus, q)
    return q


def post_measurement_operator(p: MarkovProcess, i: int, future: OutcomeSequence) -> PostOperator:
    """
    Q_i(𝐦_{n:i+1})：从 Q = 1 出发，对 j = n..i+1 依次作 K_j†•K_j 与 Λ†_{j:j-1}；i = n 时为恒等
    """
    p.check_time(i)
    _require_times(future, range(i + 1, p.n + 1), f"时刻 {i} 的未来")
    p.check_sequence(future)
    return PostOperator(time=i, future=future, op=as_matrix(_post_operator_matrix(p, i, future), "Q"))


def split_prob(p: MarkovProcess, i: int, seq: OutcomeSequence) -> float:
    """tr[ρ̃_i(𝐦_{i-1:1}) K_i^{(m_i)†} Q_i(𝐦_{n:i+1}) K_i^{(m_i)}]"""
    _require_times(seq, range(1, p.n + 1), "split_prob 的结果序列")
    p.check_time(i)
    history = OutcomeSequence(tuple((t, m) for t, m in seq if t < i))
    future = OutcomeSequence(tuple((t, m) for t, m in seq if t > i))
    label = dict(seq.outcomes)[i]
    rho = pre_measurement_state(p, i, history).state.mat
    q = post_measurement_operator(p, i, future).op
    k = p.instrument(i).kraus(label)
    return float(np.trace(rho @ k.conj().T @ q @ k).real)


# ==================== 联合分布 ====================


def _walk(
    p: MarkovProcess,
    times: tuple[int, ...],
    depth: int,
    mat: ComplexMatrix,
    current: int,
    prefix: tuple[str, ...],
    out: dict[tuple[str, ...], float],
) -> None:
    if depth == len(times):
        out[prefix] = float(np.trace(mat).real)
        return
    t = times[depth]
    mat = _advance(p, mat, current, t)
    for label, k in p.instrument(t).elements.items():
        _walk(p, times, depth + 1, k @ mat @ k.conj().T, t, prefix + (label,), out)


def full_distribution(
    p: MarkovProcess,
    measure_at: Iterable[int] | None = None,
    workers: int = 1,
) -> JointDistribution:
    """
    测量时刻子集上的联合分布。
    :param measure_at: 测量时刻集合，None 表示全部时刻，空集合表示不测量（单个空结果，概率 1）
    :param workers: >1 时按第一个测量时刻的结果分支并行；每个条目的求和顺序固定，结果与并行度无关
    """
    times = tuple(sorted(set(range(1, p.n + 1) if measure_at is None else measure_at)))
    for t in times:
        p.check_time(t)
    outcomes = tuple(p.outcomes(t) for t in times)

    table: dict[tuple[str, ...], float] = {}
    if not times:
        table[()] = p.initial.trace
    elif workers > 1:
        first = times[0]
        start = _advance(p, p.initial.mat, 1, first)

        def branch(label: str) -> dict[tuple[str, ...], float]:
            k = p.instrument(first).kraus(label)
            part: dict[tuple[str, ...], float] = {}
            _walk(p, times, 1, k @ start @ k.conj().T, first, (label,), part)
            return part

        with ThreadPoolExecutor(max_workers=workers) as executor:
            for part in executor.map(branch, outcomes[0]):
                table.update(part)
    else:
        _walk(p, times, 0, p.initial.mat, 1, (), table)

    dist = JointDistribution(times, outcomes, table)
    log.debug(f"{p.name}: 时刻 {times} 上的联合分布共 {len(dist)} 项，总和 {dist.total():.12g}")
    return dist


def marginalize(dist: JointDistribution, i: int) -> JointDistribution:
    """对时刻 i 的结果求和"""
    if i not in dist.times:
        log.error(f"时刻 {i} 不在分布的测量时刻 {dist.times} 中")
        raise InvalidTimeError(f"时刻 {i} 未被测量，无法边缘化", {"time": i, "times": list(dist.times)})
    pos = dist.times.index(i)
    table: dict[tuple[str, ...], float] = {}
    for key, value in dist.table.items():
        reduced = key[:pos] + key[pos + 1:]
        table[reduced] = table.get(reduced, 0.0) + value
    return JointDistribution(
        dist.times[:pos] + dist.times[pos + 1:],
        dist.outcomes[:pos] + dist.outcomes[pos + 1:],
        table,
    )


# ==================== 对照实现 ====================


def kraus_path_probability(p: MarkovProcess, seq: OutcomeSequence) -> float:
    """
    对动力学 Kraus 指标 (ℓ_2, …, ℓ_n) 的全部路径逐一求和：
    Σ_ℓ tr(R_ℓ ρ R_ℓ†)，R_ℓ = K_n L_n^{(ℓ_n)} … L_2^{(ℓ_2)} K_1。只用于测试对照。
    """
    _require_times(seq, range(1, p.n + 1), "kraus_path_probability 的结果序列")
    p.check_sequence(seq)
    kraus = [p.instrument(t).kraus(m) for t, m in seq]
    total = 0.0
    for path in itertools.product(*(channel.kraus for channel in p.dynamics)):
        r = kraus[0]
        for l_op, k_op in zip(path, kraus[1:]):
            r = k_op @ l_op @ r
        total += float(np.trace(r @ p.initial.mat @ r.conj().T).real)
    return total


def is_unreachable(state: ConditionedState, eps: float = DEFAULT_TOL) -> bool:
    """历史概率低于 eps 的上下文视为不可达"""
    return state.probability < eps
