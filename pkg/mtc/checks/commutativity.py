"""
对易性判据

- check_commutators：‖[K_i^{(m_i)}, Q_i(𝐦_{n:i+1})]‖
- check_weak_commutativity：|tr(ρ̃_i [K, Q])|
- check_absolute_commutativity：tr(ρ̃_i |[K, Q]|)
- check_lueders_fixed_point / check_fixed_points：𝒦†[Q] = Q 与 [K^{(a)}, Q] = 0 的比较
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from mtc.checks.contexts import (
    LUEDERS_DISAGREEMENT,
    NON_HERMITIAN_KRAUS,
    UNREACHABLE,
    context_fields,
    time_contexts,
)
from mtc.core.errors import NotHermitianError, NotPositiveSemidefiniteError
from mtc.core.log_manager import log
from mtc.core.opmat import DEFAULT_TOL, abs_value, as_matrix, commutator, hermitian_part, hs_norm, is_hermitian
from mtc.core.process import Instrument, MarkovProcess, instrument_total_adjoint
from mtc.models import CheckResult, ContextRecord, LuedersResult


def _verdict(name: str, p: MarkovProcess, result: CheckResult) -> CheckResult:
    log.info(f"{p.name}: {name} {'PASS' if result.passed else 'FAIL'} (max residual {result.max_residual:.3e})")
    return result


def check_commutators(p: MarkovProcess, eps: float = DEFAULT_TOL) -> CheckResult:
    records = []
    for i in range(1, p.n + 1):
        ctx = time_contexts(p, i)
        for label, k in p.instrument(i).elements.items():
            for post in ctx.operators:
                records.append(ContextRecord(
                    **context_fields(None, post, i),
                    outcome=label,
                    residual=hs_norm(commutator(k, post.op)),
                ))
    return _verdict("commutators", p, CheckResult.from_records("commutators", eps, records))


def _state_records(p: MarkovProcess, eps: float, residual_fn) -> list[ContextRecord]:
    """对每个 (历史, 结果, 未来) 计算 residual_fn(ρ̃, [K, Q])"""
    records = []
    for i in range(1, p.n + 1):
        ctx = time_contexts(p, i)
        for label, k in p.instrument(i).elements.items():
            comms = [(post, commutator(k, post.op)) for post in ctx.operators]
            for state in ctx.states:
                for post, comm in comms:
                    fields = context_fields(state, post, i)
                    if state.probability < eps:
                        records.append(ContextRecord(**fields, outcome=label, residual=0.0, flags=[UNREACHABLE]))
                        continue
                    records.append(ContextRecord(**fields, outcome=label, residual=residual_fn(state.state.mat, comm)))
    return records


def check_weak_commutativity(p: MarkovProcess, eps: float = DEFAULT_TOL) -> CheckResult:
    records = _state_records(p, eps, lambda rho, comm: float(abs(np.trace(rho @ comm))))
    return _verdict("weak", p, CheckResult.from_records("weak", eps, records))


def check_absolute_commutativity(p: MarkovProcess, eps: float = DEFAULT_TOL) -> CheckResult:
    records = _state_records(
        p, eps, lambda rho, comm: max(0.0, float(np.trace(rho @ abs_value(comm)).real))
    )
    return _verdict("absolute", p, CheckResult.from_records("absolute", eps, records))


def check_lueders_fixed_point(instrument: Instrument, q: ArrayLike, eps: float = DEFAULT_TOL) -> LuedersResult:
    """
    比较 𝒦†[Q] = Q 与全部 [K^{(a)}, Q] = 0；仪器 Kraus 全部厄米时两者应一致
    :param q: 厄米半正定效应算子
    """
    q = as_matrix(q, "Q")
    if not is_hermitian(q, eps):
        raise NotHermitianError("Q 必须是厄米矩阵")
    min_eig = float(linalg.eigvalsh(hermitian_part(q)).min())
    if min_eig < -eps:
        log.error(f"Q 不是半正定矩阵，最小本征值 {min_eig:.3e}")
        raise NotPositiveSemidefiniteError(f"Q 不是半正定矩阵，最小本征值 {min_eig:.3e}", {"min_eigenvalue": min_eig})

    fixed_residual = hs_norm(instrument_total_adjoint(instrument, q) - q)
    comm_residuals = {label: hs_norm(commutator(k, q)) for label, k in instrument.elements.items()}
    fixed_point = fixed_residual < eps
    commuting = all(r < eps for r in comm_residuals.values())
    all_hermitian = instrument.is_hermitian(eps)
    agreement = (fixed_point == commuting) if all_hermitian else None
    if agreement is False:
        log.warning(
            f"厄米仪器 {instrument.name!r} 上不动点({fixed_residual:.3e})与对易性"
            f"({max(comm_residuals.values()):.3e})结论不一致"
        )
    return LuedersResult(
        fixed_point=fixed_point,
        commuting=commuting,
        fixed_point_residual=fixed_residual,
        commutator_residuals=comm_residuals,
        all_hermitian=all_hermitian,
        agreement=agreement,
    )


def check_fixed_points(p: MarkovProcess, eps: float = DEFAULT_TOL) -> CheckResult:
    """每个 (时刻, 未来) 上 ‖𝒦_i†[Q_i] − Q_i‖；厄米仪器上与对易性结论不一致时加标记"""
    records = []
    for i in range(1, p.n + 1):
        ins = p.instrument(i)
        for post in time_contexts(p, i).operators:
            res = check_lueders_fixed_point(ins, hermitian_part(post.op), eps)
            flags = [] if res.all_hermitian else [NON_HERMITIAN_KRAUS]
            if res.agreement is False:
                flags.append(LUEDERS_DISAGREEMENT)
            records.append(ContextRecord(
                **context_fields(None, post, i), residual=res.fixed_point_residual, flags=flags,
            ))
    return _verdict("fixed_points", p, CheckResult.from_records("fixed_points", eps, records))
