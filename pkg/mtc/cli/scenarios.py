"""
内置场景

每个场景是一个完整的 MarkovProcess（外加注记），同时以过程描述文件形式随包发布于
mtc/assets/scenarios/<id>.json，二者矩阵在 1e-12 内一致。
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from mtc.checks.analyzer import analyze
from mtc.cli.process_file import ProcessDocument
from mtc.core.errors import UnknownScenarioError
from mtc.core.log_manager import log
from mtc.core.opmat import hadamard, ket, qubit_state
from mtc.core.process import DensityMatrix, Instrument, KrausSet, MarkovProcess
from mtc.models import AnalysisConfig, ClassicalityReport

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "assets" / "scenarios"

_S = 1.0 / np.sqrt(2.0)


def _outer(a: int, b: int, d: int) -> np.ndarray:
    """|a⟩⟨b|（下标从 0 开始）"""
    return np.outer(ket(d, a), ket(d, b).conj())


def _qubit_projective(labels_states: dict[str, str], name: str) -> Instrument:
    return Instrument.projective(
        [qubit_state(s) for s in labels_states.values()], list(labels_states), name=name
    )


# ==================== 场景构造 ====================


def _lueders_ex1() -> MarkovProcess:
    s2, s10 = np.sqrt(2.0), np.sqrt(10.0)
    k = [
        0.5 * np.array([[s2, 0, -1], [0, 0, 0], [0, 0, 0]]),
        (s10 / 10) * np.array([[0, 0, 0], [0, -1, 2], [0, 0, 0]]),
        0.5 * np.array([[0, 0, 0], [0, s2, 0], [0, 0, 0]]),
        (s10 / 20) * np.array([[0, 0, 0], [0, 4, 2], [0, 0, 0]]),
        0.5 * np.array([[s2, 0, 1], [0, 0, 0], [0, 0, 0]]),
    ]
    readout = Instrument({"1": np.diag([1.0, 0.0, _S]), "2": np.diag([0.0, 1.0, _S])}, name="sqrt-Q")
    return MarkovProcess(
        initial=DensityMatrix.maximally_mixed(3),
        dynamics=(KrausSet.identity(3),),
        instruments=(Instrument({str(j + 1): kj for j, kj in enumerate(k)}, name="five-kraus"), readout),
        name="lueders-ex1",
        description="两个效应算子都是仪器的不动点，但 K5 与 Q1 不对易",
    )


def _sign_probe(initial: str, name: str, description: str) -> MarkovProcess:
    return MarkovProcess(
        initial=DensityMatrix.pure(qubit_state(initial)),
        dynamics=(KrausSet.identity(2),),
        instruments=(
            _qubit_projective({"+": "+", "-": "-"}, "sigma_x"),
            _qubit_projective({"+": "0", "-": "1"}, "sigma_z"),
        ),
        name=name,
        description=description,
    )


def _weak_comm_ex2() -> MarkovProcess:
    return _sign_probe("0", "weak-comm-ex2", "弱对易成立而 Kolmogorov 一致性不成立")


def _abs_comm_ex3() -> MarkovProcess:
    return _sign_probe("+i", "abs-comm-ex3", "Kolmogorov 一致性成立而绝对对易不成立")


def _inclusion_ex4() -> MarkovProcess:
    z = {"0": "0", "1": "1"}
    return MarkovProcess(
        initial=DensityMatrix.pure(qubit_state("0")),
        dynamics=(KrausSet.unitary(hadamard(), "hadamard"), KrausSet.unitary(hadamard(), "hadamard")),
        instruments=(
            _qubit_projective(z, "sigma_z"),
            _qubit_projective({"+": "+", "-": "-"}, "sigma_x"),
            _qubit_projective(z, "sigma_z"),
        ),
        name="inclusion-ex4",
        description="三步过程，t2 处 𝔽 ⊆ ℍ 且全部对易",
    )


def _skipping_ex5() -> MarkovProcess:
    d = 4
    low = np.diag([1.0, 1.0, 0.0, 0.0])
    high = np.diag([0.0, 0.0, 1.0, 1.0])
    l21 = KrausSet(
        (_outer(0, 0, d) + _outer(1, 3, d), _outer(1, 1, d) + _outer(3, 2, d)),
        name="L21",
    )
    minus = 0.5 * (_outer(0, 0, d) - _outer(0, 1, d) - _outer(1, 0, d) + _outer(1, 1, d))
    l32 = KrausSet(
        (_S * (_outer(2, 0, d) + _outer(2, 1, d)), minus + _outer(2, 2, d) + _outer(3, 3, d)),
        name="L32",
    )
    return MarkovProcess(
        initial=DensityMatrix.pure(np.full(d, 0.5)),
        dynamics=(l21, l32),
        instruments=tuple(Instrument({"1": low, "2": high}, name="coarse") for _ in range(3)),
        name="skipping-ex5",
        description="两时刻一致，测量第三个时刻后 t1 的侵入性才显现",
    )


def _ncgd_ex6() -> MarkovProcess:
    computational = {"0": "0", "1": "1"}
    return MarkovProcess(
        initial=DensityMatrix.maximally_mixed(2),
        dynamics=(
            KrausSet.unitary(_S * np.array([[1, 1], [1j, -1j]]), "L21"),
            KrausSet.unitary(hadamard(), "hadamard"),
        ),
        instruments=tuple(_qubit_projective(computational, "computational") for _ in range(3)),
        name="ncgd-ex6",
        description="NCGD 与 Kolmogorov 一致性成立而对易不成立",
    )


@dataclass(frozen=True)
class Scenario:
    id: str
    title: str
    build: Callable[[], MarkovProcess]
    annotations: tuple[str, ...] = ()

    @property
    def path(self) -> Path:
        return SCENARIO_DIR / f"{self.id}.json"


SCENARIOS: dict[str, Scenario] = {
    s.id: s
    for s in (
        Scenario(
            "lueders-ex1",
            "Lüders fixed points without commutativity (qutrit, five Kraus operators)",
            _lueders_ex1,
            ("both Q(1) and Q(2) are fixed points of the t1 instrument while ‖[K5, Q1]‖ ≠ 0",),
        ),
        Scenario(
            "weak-comm-ex2",
            "weak commutativity does not imply Kolmogorov consistency",
            _weak_comm_ex2,
            ("commonly quoted Kolmogorov value is +1/2; the signed value computed here is -1/2, "
             "magnitudes agree",),
        ),
        Scenario(
            "abs-comm-ex3",
            "Kolmogorov consistency without absolute commutativity",
            _abs_comm_ex3,
            ("commonly quoted absolute-commutativity residual is 1/4 with |[K,Q]| = 1/4·identity; "
             "computed |[K,Q]| = 1/2·identity and residual 1/2",
             "weak commutativity also fails here: tr(ρ̃[K,Q]) = -i/2"),
        ),
        Scenario(
            "inclusion-ex4",
            "inclusion of future projectors in the attainable states at t2",
            _inclusion_ex4,
            ("Q at t1 is degenerate (one future has Q = 0), so the consistency ⇒ commutativity "
             "audit at t1 is skipped",),
        ),
        Scenario(
            "skipping-ex5",
            "invasiveness at t1 appears only once t3 is measured",
            _skipping_ex5,
            ("two-time Kolmogorov residual at t1 vanishes; with t3 measured it equals |Re ρ14| = 1/4",),
        ),
        Scenario(
            "ncgd-ex6",
            "NCGD and Kolmogorov consistency without commutativity",
            _ncgd_ex6,
            ("commonly quoted prefactor of [K2(0), Q2(0)] = c(|0⟩⟨+| - |+⟩⟨0|) is 1/2; computed c = 1/√2",
             "commonly quoted absolute-commutativity value is tr(ρ̃2); computed value is tr(ρ̃2)/2"),
        ),
    )
}


def get_scenario(scenario_id: str) -> Scenario:
    try:
        return SCENARIOS[scenario_id]
    except KeyError:
        log.error(f"未知场景: {scenario_id}")
        raise UnknownScenarioError(
            f"未知场景: {scenario_id}，可选: {', '.join(SCENARIOS)}",
            {"scenario": scenario_id, "available": list(SCENARIOS)},
        ) from None


def load_scenario(scenario_id: str) -> ProcessDocument:
    scenario = get_scenario(scenario_id)
    return ProcessDocument(process=scenario.build(), annotations=list(scenario.annotations))


def scenario_text(scenario_id: str) -> str:
    """随包发布的场景过程描述文件内容"""
    return get_scenario(scenario_id).path.read_text(encoding="utf-8")


def run_scenario(scenario_id: str, config: AnalysisConfig | None = None) -> ClassicalityReport:
    doc = load_scenario(scenario_id)
    log.info(f"运行场景 {scenario_id}")
    return analyze(doc.process, config, annotations=doc.annotations)
