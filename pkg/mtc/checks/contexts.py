"""
判据共用的上下文枚举：每个时刻的全部 ρ̃_i(历史) 与 Q_i(未来)
"""

from __future__ import annotations

from dataclasses import dataclass

from mtc.core.process import MarkovProcess
from mtc.core.stats import (
    ConditionedState,
    PostOperator,
    futures,
    histories,
    post_measurement_operator,
    pre_measurement_state,
)

# 记录上的标记
UNREACHABLE = "unreachable context"
DEGENERATE_Q = "degenerate Q"
NON_HERMITIAN_KRAUS = "non-Hermitian Kraus"
OPERATIONAL_MISMATCH = "algebraic/operational mismatch"
LUEDERS_DISAGREEMENT = "fixed-point/commutator disagreement"


@dataclass(frozen=True, eq=False)
class TimeContexts:
    time: int
    states: tuple[ConditionedState, ...]
    operators: tuple[PostOperator, ...]


def time_contexts(p: MarkovProcess, i: int) -> TimeContexts:
    states = tuple(pre_measurement_state(p, i, h) for h in histories(p, i))
    operators = tuple(post_measurement_operator(p, i, f) for f in futures(p, i))
    return TimeContexts(time=i, states=states, operators=operators)


def all_contexts(p: MarkovProcess) -> list[TimeContexts]:
    return [time_contexts(p, i) for i in range(1, p.n + 1)]


def context_fields(state: ConditionedState | None, post: PostOperator | None, time: int) -> dict:
    """ContextRecord 的公共字段"""
    return {
        "time": time,
        "history": state.history.as_list() if state is not None else [],
        "future": post.future.as_list() if post is not None else [],
    }
