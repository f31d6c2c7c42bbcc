"""
analyze：运行所选判据并审计判据之间的蕴含关系

审计的蕴含关系（结论端与 audit_tol 比较）：
  commutators ⇒ fixed_points ⇒ kolmogorov
  commutators ⇒ absolute ⇒ kolmogorov，absolute ⇒ weak，commutators ⇒ kolmogorov
  hierarchy ⇒ kolmogorov
  t_i 仪器厄米时：fixed_points@t_i ⇔ commutators@t_i
  t_i 仪器厄米、Q_i 非简并、inclusion@t_i、初态集合上 kolmogorov@t_i ⇒ commutators@t_i
  ncgd ⇒ kolmogorov；无（近）不可达上下文时 kolmogorov ⇒ ncgd
"""

from __future__ import annotations

from typing import Callable, Sequence

from numpy.typing import ArrayLike

from mtc.checks.commutativity import (
    check_absolute_commutativity,
    check_commutators,
    check_fixed_points,
    check_weak_commutativity,
)
from mtc.checks.consistency import check_kolmogorov, check_kolmogorov_operational
from mtc.checks.contexts import DEGENERATE_Q
from mtc.checks.ncgd import check_ncgd
from mtc.checks.subspaces import check_inclusion
from mtc.core.config_manager import ConfigManager
from mtc.core.errors import InvalidProcessError, NotFixedBasisProjectiveError
from mtc.core.log_manager import log
from mtc.core.process import DensityMatrix, MarkovProcess, operator_basis_states, validate_process
from mtc.models import (
    CRITERIA,
    AnalysisConfig,
    AuditEntry,
    CheckResult,
    ClassicalityReport,
    ProcessMetadata,
)


class _Audit:
    """逐条累积审计结果"""

    def __init__(self, results: dict[str, CheckResult], audit_tol: float):
        self.results = results
        self.audit_tol = audit_tol
        self.entries: list[AuditEntry] = []

    def _missing(self, names: Sequence[str]) -> list[str]:
        return [n for n in names if n not in self.results or not self.results[n].applicable]

    def implies(self, antecedent: str, consequent: str, bound: Callable[[CheckResult], float] | None = None,
                passed: Callable[[CheckResult], bool] | None = None, time: int | None = None,
                rule: str | None = None) -> None:
        rule = rule or f"{antecedent} ⇒ {consequent}"
        missing = self._missing([antecedent, consequent])
        if missing:
            self.entries.append(AuditEntry(rule=rule, time=time, status="skipped",
                                           reason=f"not evaluated: {', '.join(missing)}"))
            return
        ante, cons = self.results[antecedent], self.results[consequent]
        ante_passed = passed(ante) if passed else ante.passed
        if not ante_passed:
            self.entries.append(AuditEntry(rule=rule, time=time, status="holds", reason="antecedent fails"))
            return
        worst = bound(cons) if bound else cons.max_residual
        self.add(rule, time, worst < self.audit_tol, f"{consequent} residual {worst:.3e}")

    def add(self, rule: str, time: int | None, holds: bool, reason: str | None = None) -> None:
        status = "holds" if holds else "violated"
        if not holds:
            log.error(f"蕴含关系被违反: {rule}" + (f" @t{time}" if time else "") + f"（{reason}）")
        self.entries.append(AuditEntry(rule=rule, time=time, status=status, reason=reason))

    def skip(self, rule: str, time: int | None, reason: str) -> None:
        self.entries.append(AuditEntry(rule=rule, time=time, status="skipped", reason=reason))


def _run_checks(
    p: MarkovProcess,
    config: AnalysisConfig,
    initial_set: Sequence[DensityMatrix] | None,
    basis: Sequence[ArrayLike] | None,
) -> dict[str, CheckResult]:
    eps = config.tolerance
    runners: dict[str, Callable[[], CheckResult]] = {
        "kolmogorov": lambda: check_kolmogorov(p, eps),
        "hierarchy": lambda: check_kolmogorov_operational(p, eps, workers=config.workers),
        "commutators": lambda: check_commutators(p, eps),
        "fixed_points": lambda: check_fixed_points(p, eps),
        "weak": lambda: check_weak_commutativity(p, eps),
        "absolute": lambda: check_absolute_commutativity(p, eps),
        "inclusion": lambda: check_inclusion(
            p, None, initial_set, eps, config.degeneracy_tol, config.rank_tol
        ),
        "ncgd": lambda: check_ncgd(p, basis, eps),
    }
    results: dict[str, CheckResult] = {}
    for name in CRITERIA:
        if name not in config.tests:
            continue
        try:
            results[name] = runners[name]()
        except NotFixedBasisProjectiveError as e:
            log.info(f"{p.name}: {name} 不适用: {e.message}")
            results[name] = CheckResult.not_applicable(name, eps, e.message)
    return results


def _audit(
    p: MarkovProcess,
    results: dict[str, CheckResult],
    config: AnalysisConfig,
    hermitian: list[bool],
    initial_set: Sequence[DensityMatrix] | None,
) -> list[AuditEntry]:
    audit = _Audit(results, config.effective_audit_tol)

    audit.implies("commutators", "fixed_points")
    audit.implies("fixed_points", "kolmogorov")
    audit.implies("commutators", "absolute")
    audit.implies("absolute", "kolmogorov")
    audit.implies("absolute", "weak")
    audit.implies("commutators", "kolmogorov")
    audit.implies("hierarchy", "kolmogorov")

    # 厄米 Kraus 下不动点与对易性逐时刻等价
    for i in range(1, p.n + 1):
        rule = "fixed_points ⇔ commutators (Hermitian Kraus)"
        if not hermitian[i - 1]:
            audit.skip(rule, i, "non-Hermitian Kraus")
            continue
        for a, b in (("fixed_points", "commutators"), ("commutators", "fixed_points")):
            audit.implies(a, b, bound=lambda r, t=i: r.max_at(t), passed=lambda r, t=i: r.max_at(t) < r.tolerance,
                          time=i, rule=f"{a} ⇒ {b} (Hermitian Kraus)")

    # 一致性 + 包含 + 非简并 + 厄米 ⇒ 对易
    rule = "hermitian ∧ non-degenerate ∧ inclusion ∧ kolmogorov(initial set) ⇒ commutators"
    missing = audit._missing(["inclusion", "commutators"])
    if missing:
        audit.skip(rule, None, f"not evaluated: {', '.join(missing)}")
    else:
        states = operator_basis_states(p.dim) if initial_set is None else list(initial_set)
        over_set = check_kolmogorov(p, config.tolerance, initial_set=states, cross_check=False)
        for i in range(1, p.n):
            unmet = []
            if not hermitian[i - 1]:
                unmet.append("non-Hermitian Kraus")
            inclusion = results["inclusion"].at_time(i)
            if any(DEGENERATE_Q in r.flags for r in inclusion):
                unmet.append("degenerate Q")
            if results["inclusion"].max_at(i) >= config.tolerance:
                unmet.append("inclusion fails")
            if over_set.max_at(i) >= config.tolerance:
                unmet.append("kolmogorov fails on initial set")
            if unmet:
                audit.skip(rule, i, ", ".join(unmet))
                continue
            worst = results["commutators"].max_at(i)
            audit.add(rule, i, worst < audit.audit_tol, f"commutators residual {worst:.3e}")

    # NCGD 与一致性
    audit.implies("ncgd", "kolmogorov")
    rule = "kolmogorov ⇒ ncgd"
    kolmogorov = results.get("kolmogorov")
    if audit._missing(["kolmogorov", "ncgd"]):
        audit.skip(rule, None, "not evaluated or not applicable")
    elif kolmogorov.summary.get("min_history_probability", 0.0) < audit.audit_tol:
        audit.skip(rule, None, "(near-)unreachable context")
    else:
        audit.implies("kolmogorov", "ncgd", rule=rule)

    return audit.entries


def analyze(
    p: MarkovProcess,
    config: AnalysisConfig | None = None,
    initial_set: Sequence[DensityMatrix] | None = None,
    basis: Sequence[ArrayLike] | None = None,
    annotations: Sequence[str] | None = None,
) -> ClassicalityReport:
    """
    运行 config.tests 中的判据并审计蕴含关系
    :param initial_set: ℍ_i 与"对全部初态"量词使用的初态集合，默认 operator_basis_states(d)
    :param basis: NCGD 的固定测量基，默认计算基
    :param annotations: 附加到报告上的说明文字
    """
    config = config or ConfigManager.load_config()
    validation = validate_process(p, config.tolerance)
    if not validation.valid:
        messages = [f"{issue.component}: {issue.message}" for issue in validation.issues]
        log.error(f"过程 {p.name} 无效，无法分析: {messages}")
        raise InvalidProcessError(f"过程 {p.name} 无效", {"issues": messages})

    results = _run_checks(p, config, initial_set, basis)
    audit = _audit(p, results, config, validation.hermitian_instruments, initial_set)
    report = ClassicalityReport(
        process=ProcessMetadata(
            name=p.name,
            description=p.description,
            dimension=p.dim,
            times=p.n,
            outcomes=[list(ins.labels) for ins in p.instruments],
            hermitian_instruments=validation.hermitian_instruments,
        ),
        tolerance=config.tolerance,
        audit_tolerance=config.effective_audit_tol,
        results=results,
        audit=audit,
        annotations=list(annotations or []),
    )
    if report.violations:
        log.error(f"{p.name}: 审计发现 {len(report.violations)} 处蕴含关系违反")
    else:
        log.info(f"{p.name}: 审计通过，{sum(a.status == 'holds' for a in audit)} 条成立")
    return report
