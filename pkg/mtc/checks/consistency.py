"""
Kolmogorov 一致性

- check_kolmogorov：代数形式，逐上下文计算 tr[ρ̃_i(𝒦_i†[Q_i] − Q_i)]，并与"测量后求和 vs 不测量"的概率差交叉核对
- check_kolmogorov_operational：完整层级，对每个测量时刻子集 S 与 i ∈ S 比较
  marginalize(full_distribution(S), i) 与 full_distribution(S∖{i})
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from mtc.checks.contexts import OPERATIONAL_MISMATCH, UNREACHABLE, context_fields, time_contexts
from mtc.core.log_manager import log
from mtc.core.opmat import DEFAULT_TOL
from mtc.core.process import DensityMatrix, MarkovProcess, OutcomeSequence, channel_adjoint
from mtc.core.stats import JointDistribution, full_distribution, marginalize, sequence_prob
from mtc.models import CheckResult, ContextRecord


def _operational_value(p: MarkovProcess, i: int, history: OutcomeSequence, future: OutcomeSequence) -> float:
    """Σ_{m_i} ℙ(未来, m_i, 历史) − ℙ(未来, 不测 t_i, 历史)"""
    measured = sum(
        sequence_prob(p, history + OutcomeSequence(((i, m),)) + future) for m in p.outcomes(i)
    )
    return measured - sequence_prob(p, history + future)


def _kolmogorov_records(
    p: MarkovProcess,
    eps: float,
    cross_check: bool,
    state_index: int | None,
) -> tuple[list[ContextRecord], float]:
    records: list[ContextRecord] = []
    min_probability = 1.0
    for i in range(1, p.n + 1):
        ctx = time_contexts(p, i)
        kraus = p.instrument(i).elements.values()
        for state in ctx.states:
            min_probability = min(min_probability, state.probability)
            for post in ctx.operators:
                fields = context_fields(state, post, i)
                if state.probability < eps:
                    records.append(ContextRecord(**fields, residual=0.0, flags=[UNREACHABLE], state_index=state_index))
                    continue
                delta = channel_adjoint(kraus, post.op) - post.op
                value = float(np.trace(state.state.mat @ delta).real)
                flags = []
                if cross_check:
                    operational = _operational_value(p, i, state.history, post.future)
                    if abs(operational - value) > eps:
                        log.warning(
                            f"{p.name}: t{i} 上下文 ({state.history} | {post.future}) 代数值 {value:.3e} "
                            f"与操作值 {operational:.3e} 不一致"
                        )
                        flags.append(OPERATIONAL_MISMATCH)
                records.append(ContextRecord(
                    **fields, residual=abs(value), value=value, flags=flags, state_index=state_index,
                ))
    return records, min_probability


def check_kolmogorov(
    p: MarkovProcess,
    eps: float = DEFAULT_TOL,
    initial_set: Sequence[DensityMatrix] | None = None,
    cross_check: bool = True,
) -> CheckResult:
    """
    Kolmogorov 一致性（代数形式）
    :param initial_set: 给定时对集合中每个初态分别评估（记录带 state_index），否则只用 p 的初态
    :param cross_check: 是否逐上下文与概率差核对（不一致时标记 OPERATIONAL_MISMATCH）
    """
    records: list[ContextRecord] = []
    min_probability = 1.0
    if initial_set is None:
        records, min_probability = _kolmogorov_records(p, eps, cross_check, None)
    else:
        for s, rho in enumerate(initial_set):
            part, low = _kolmogorov_records(p.with_initial(rho), eps, cross_check, s)
            records.extend(part)
            min_probability = min(min_probability, low)

    summary = {f"t{i}": max((r.residual for r in records if r.time == i), default=0.0) for i in range(1, p.n + 1)}
    summary.update({
        f"t{i}:sum": float(sum(r.residual for r in records if r.time == i)) for i in range(1, p.n + 1)
    })
    summary["min_history_probability"] = min_probability
    result = CheckResult.from_records("kolmogorov", eps, records, summary)
    log.info(f"{p.name}: kolmogorov {'PASS' if result.passed else 'FAIL'} (max residual {result.max_residual:.3e})")
    return result


def _split(key: tuple[str, ...], times: tuple[int, ...], i: int) -> tuple[list, list]:
    pairs = list(zip(times, key))
    return [pr for pr in pairs if pr[0] < i], [pr for pr in pairs if pr[0] > i]


def check_kolmogorov_operational(
    p: MarkovProcess,
    eps: float = DEFAULT_TOL,
    workers: int = 1,
) -> CheckResult:
    """
    一致性层级：对每个非空测量时刻子集 S 与 i ∈ S，逐条目比较边缘化分布与跳过 t_i 的分布。
    summary 中的键为 "S=t1,t2,t3|i=t1" 形式。
    """
    cache: dict[tuple[int, ...], JointDistribution] = {}

    def dist(times: tuple[int, ...]) -> JointDistribution:
        if times not in cache:
            cache[times] = full_distribution(p, times, workers=workers)
        return cache[times]

    records: list[ContextRecord] = []
    summary: dict[str, float] = {}
    all_times = tuple(range(1, p.n + 1))
    for size in range(1, p.n + 1):
        for subset in itertools.combinations(all_times, size):
            for i in subset:
                rest = tuple(t for t in subset if t != i)
                marginal = marginalize(dist(subset), i)
                skipped = dist(rest)
                worst = 0.0
                for key, value in marginal.items():
                    residual = abs(value - skipped.probability(key))
                    history, future = _split(key, rest, i)
                    records.append(ContextRecord(
                        time=i, history=history, future=future, residual=residual, value=value - skipped.probability(key),
                    ))
                    worst = max(worst, residual)
                summary[f"S={','.join(f't{t}' for t in subset)}|i=t{i}"] = worst

    result = CheckResult.from_records("hierarchy", eps, records, summary)
    log.info(f"{p.name}: hierarchy {'PASS' if result.passed else 'FAIL'} (max residual {result.max_residual:.3e})")
    return result
