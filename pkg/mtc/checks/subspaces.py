"""
可达态子空间 ℍ_i、未来投影子空间 𝔽_i 与包含关系 𝔽_i ⊆ ℍ_i
"""

from __future__ import annotations

from typing import Sequence

from mtc.checks.contexts import DEGENERATE_Q, NON_HERMITIAN_KRAUS
from mtc.core.errors import EmptyInputError, InvalidTimeError
from mtc.core.log_manager import log
from mtc.core.opmat import (
    DEFAULT_DEGENERACY_TOL,
    DEFAULT_TOL,
    OperatorSubspace,
    hermitian_part,
    herm_eig,
    span_of_spectra,
    subspace_contains,
    subspace_span,
)
from mtc.core.process import DensityMatrix, MarkovProcess, operator_basis_states
from mtc.core.stats import futures, histories, post_measurement_operator, pre_measurement_state
from mtc.models import CheckResult, ContextRecord


def compute_H(
    p: MarkovProcess,
    i: int,
    initial_set: Sequence[DensityMatrix] | None = None,
    rank_tol: float = DEFAULT_TOL,
) -> OperatorSubspace:
    """
    ℍ_i：初态集合中每个初态、每个历史下 ρ̃_i 的张成；ℍ_1 = span(初态集合)
    :param initial_set: 默认取 operator_basis_states(d)
    """
    p.check_time(i)
    states = operator_basis_states(p.dim) if initial_set is None else list(initial_set)
    if not states:
        log.error("compute_H 的初态集合为空")
        raise EmptyInputError("compute_H 需要非空的初态集合")
    attainable = []
    for rho in states:
        q = p.with_initial(rho)
        attainable.extend(pre_measurement_state(q, i, h).state.mat for h in histories(q, i))
    return subspace_span(attainable, rank_tol)


def compute_F(
    p: MarkovProcess,
    i: int,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
    rank_tol: float = DEFAULT_TOL,
) -> tuple[OperatorSubspace, bool]:
    """
    𝔽_i：全部未来 Q_i(𝐦_{n:i+1}) 的谱投影的张成；第二个返回值表示是否存在简并的 Q_i
    """
    p.check_time(i)
    if i >= p.n:
        raise InvalidTimeError(f"compute_F 要求 i < n（i={i}, n={p.n}）", {"time": i, "times": p.n})
    spectra = [
        herm_eig(hermitian_part(post_measurement_operator(p, i, f).op), degeneracy_tol)
        for f in futures(p, i)
    ]
    degenerate = any(s.is_degenerate for s in spectra)
    return span_of_spectra(spectra, rank_tol), degenerate


def check_inclusion(
    p: MarkovProcess,
    i: int | None = None,
    initial_set: Sequence[DensityMatrix] | None = None,
    eps: float = DEFAULT_TOL,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
    rank_tol: float = DEFAULT_TOL,
) -> CheckResult:
    """
    𝔽_i ⊆ ℍ_i；i=None 时检查全部 i < n。
    记录上标记 Q_i 简并与 t_i 仪器非厄米（两者都使"一致性 ⇒ 对易"的结论失去前提）。
    """
    if p.n == 1:
        return CheckResult.not_applicable("inclusion", eps, "single-time process has no future operators")
    times = range(1, p.n) if i is None else [i]
    records = []
    summary: dict[str, float] = {}
    for t in times:
        h_space = compute_H(p, t, initial_set, rank_tol)
        f_space, degenerate = compute_F(p, t, degeneracy_tol, rank_tol)
        contained, residual = subspace_contains(h_space, f_space, eps)
        flags = []
        if degenerate:
            flags.append(DEGENERATE_Q)
        if not p.instrument(t).is_hermitian(eps):
            flags.append(NON_HERMITIAN_KRAUS)
        if flags:
            log.warning(f"{p.name}: t{t} 的包含关系检查带有标记 {flags}")
        records.append(ContextRecord(time=t, residual=residual, flags=flags))
        summary[f"t{t}:dim_H"] = float(h_space.rank)
        summary[f"t{t}:dim_F"] = float(f_space.rank)
        log.debug(f"{p.name}: t{t} dim ℍ={h_space.rank} dim 𝔽={f_space.rank} 包含={contained}")
    result = CheckResult.from_records("inclusion", eps, records, summary)
    log.info(f"{p.name}: inclusion {'PASS' if result.passed else 'FAIL'} (max residual {result.max_residual:.3e})")
    return result
