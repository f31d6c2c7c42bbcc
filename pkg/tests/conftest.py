# @time:    2026-03-10
"""
公共 fixture：随机过程工厂、内置场景、配置隔离
"""

import numpy as np
import pytest

from mtc.cli.scenarios import load_scenario
from mtc.core.config_manager import ConfigManager
from mtc.core.process import DensityMatrix, Instrument, KrausSet, MarkovProcess

SEED = 20260310


# ==================== 随机构造 ====================


def _ginibre(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def _inv_sqrt(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(s)
    return (v / np.sqrt(w)) @ v.conj().T


def random_state(rng: np.random.Generator, d: int) -> DensityMatrix:
    g = _ginibre(rng, d)
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, d))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_kraus(rng: np.random.Generator, d: int, count: int) -> list[np.ndarray]:
    """Σ K†K = 1 的随机 Kraus 组"""
    mats = [_ginibre(rng, d) for _ in range(count)]
    inv = _inv_sqrt(sum(a.conj().T @ a for a in mats))
    return [a @ inv for a in mats]


def random_instrument(rng: np.random.Generator, d: int, outcomes: int) -> Instrument:
    return Instrument({str(k): op for k, op in enumerate(random_kraus(rng, d, outcomes))}, name="random")


def random_hermitian_instrument(rng: np.random.Generator, d: int, outcomes: int, commuting: bool = False) -> Instrument:
    """
    Kraus 算子为 √E_a 的仪器（厄米）；commuting=True 时所有 E_a 在同一随机基下对角
    """
    if commuting:
        u = random_unitary(rng, d)
        weights = rng.dirichlet(np.ones(outcomes), size=d)  # weights[j, a]
        effects = [u @ np.diag(weights[:, a]) @ u.conj().T for a in range(outcomes)]
    else:
        raw = [g @ g.conj().T for g in (_ginibre(rng, d) for _ in range(outcomes))]
        inv = _inv_sqrt(sum(raw))
        effects = [inv @ b @ inv for b in raw]
    ops = {}
    for a, e in enumerate(effects):
        w, v = np.linalg.eigh((e + e.conj().T) / 2)
        ops[str(a)] = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    return Instrument(ops, name="hermitian")


def random_channel(rng: np.random.Generator, d: int, count: int | None = None) -> KrausSet:
    count = count or int(rng.integers(1, 4))
    return KrausSet(tuple(random_kraus(rng, d, count)), name="random")


def stochastic_channel(rng: np.random.Generator, d: int) -> KrausSet:
    """经典随机矩阵 T 对应的 Kraus {√T_ba |b⟩⟨a|}"""
    t = rng.dirichlet(np.ones(d), size=d).T  # 列随机：Σ_b T[b, a] = 1
    ops = []
    for a in range(d):
        for b in range(d):
            op = np.zeros((d, d), dtype=np.complex128)
            op[b, a] = np.sqrt(t[b, a])
            ops.append(op)
    return KrausSet(tuple(ops), name="stochastic")


def diagonal_instrument(rng: np.random.Generator, d: int, outcomes: int) -> Instrument:
    """计算基下对角的厄米仪器 K_a = diag(√p_a(j))"""
    weights = rng.dirichlet(np.ones(outcomes), size=d)
    return Instrument({str(a): np.diag(np.sqrt(weights[:, a])) for a in range(outcomes)}, name="diagonal")


def random_process(rng: np.random.Generator, d: int, n: int, max_outcomes: int = 3) -> MarkovProcess:
    return MarkovProcess(
        initial=random_state(rng, d),
        dynamics=tuple(random_channel(rng, d) for _ in range(n - 1)),
        instruments=tuple(random_instrument(rng, d, int(rng.integers(1, max_outcomes + 1))) for _ in range(n)),
        name="random",
    )


def classical_process(rng: np.random.Generator, d: int, n: int, max_outcomes: int = 3) -> MarkovProcess:
    """对角仪器 + 经典随机动力学：所有对易判据成立"""
    return MarkovProcess(
        initial=random_state(rng, d),
        dynamics=tuple(stochastic_channel(rng, d) for _ in range(n - 1)),
        instruments=tuple(diagonal_instrument(rng, d, int(rng.integers(2, max_outcomes + 1))) for _ in range(n)),
        name="classical",
    )


def fixed_basis_process(rng: np.random.Generator, d: int, n: int, classical_steps: list[bool]) -> MarkovProcess:
    """计算基秩一投影测量；每一步动力学按 classical_steps 取经典随机或随机酉"""
    dynamics = tuple(
        stochastic_channel(rng, d) if classical else KrausSet.unitary(random_unitary(rng, d), "random-unitary")
        for classical in classical_steps
    )
    return MarkovProcess(
        initial=random_state(rng, d),
        dynamics=dynamics,
        instruments=tuple(Instrument.projective(list(np.eye(d))) for _ in range(n)),
        name="fixed-basis",
    )


def support_restricted_process(rng: np.random.Generator) -> MarkovProcess:
    """
    qutrit 三步过程，t2 的态总在 S = span{|0⟩, |1⟩} 内
    - Λ_{2:1}：随机 CPTP，输出落在 S 上
    - t2：K_a = [[k_a, x_a], [0, c_a]]，k_a 在 S 的随机基 w 下对角，x_a 把 |2⟩ 部分映入 S
    - t3：效应 (w·diag(β_b)·w†) ⊕ r_b
    于是 [K_a, Q] 在 S 上为零、在 |2⟩ 列上一般不为零
    """
    w = random_unitary(rng, 2)
    weights = rng.dirichlet(np.ones(2), size=2)  # weights[j, a]
    phases = np.exp(2j * np.pi * rng.random((2, 2)))
    k = [w @ np.diag(np.sqrt(weights[:, a]) * phases[:, a]) @ w.conj().T for a in range(2)]

    # Σ k_a† x_a = 0，且 Σ (‖x_a‖² + |c_a|²) = 1
    x0 = rng.normal(size=2) + 1j * rng.normal(size=2)
    x1 = -np.linalg.solve(k[1].conj().T, k[0].conj().T @ x0)
    scale = np.sqrt(0.5 / (np.vdot(x0, x0).real + np.vdot(x1, x1).real))
    xs = [x0 * scale, x1 * scale]
    middle = {}
    for a in range(2):
        op = np.zeros((3, 3), dtype=np.complex128)
        op[:2, :2] = k[a]
        op[:2, 2] = xs[a]
        op[2, 2] = np.sqrt(0.5) * np.exp(2j * np.pi * rng.random())
        middle[str(a)] = op

    beta = rng.dirichlet(np.ones(2), size=2)  # beta[j, b]
    r = rng.dirichlet(np.ones(2))
    last = {}
    for b in range(2):
        op = np.zeros((3, 3), dtype=np.complex128)
        op[:2, :2] = w @ np.diag(np.sqrt(beta[:, b])) @ w.conj().T
        op[2, 2] = np.sqrt(r[b])
        last[str(b)] = op

    raw = [rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3)) for _ in range(2)]
    inv = _inv_sqrt(sum(g.conj().T @ g for g in raw))
    into_s = []
    for g in raw:
        op = np.zeros((3, 3), dtype=np.complex128)
        op[:2, :] = g @ inv
        into_s.append(op)

    return MarkovProcess(
        initial=random_state(rng, 3),
        dynamics=(KrausSet(tuple(into_s), name="into-S"), KrausSet.identity(3)),
        instruments=(Instrument.trivial(3), Instrument(middle, name="block"), Instrument(last, name="block-effects")),
        name="support-restricted",
    )


def basis_instrument(rng: np.random.Generator, u: np.ndarray, outcomes: int) -> Instrument:
    """在 u 的列基下对角的厄米仪器 K_a = u·diag(√w_a)·u†"""
    weights = rng.dirichlet(np.ones(outcomes), size=u.shape[0])
    ops = {str(a): u @ np.diag(np.sqrt(weights[:, a])) @ u.conj().T for a in range(outcomes)}
    return Instrument(ops, name="basis")


def hermitian_chain_process(rng: np.random.Generator, d: int, n: int, aligned: bool) -> MarkovProcess:
    """
    每个时刻在各自随机基 u_i 下对角的厄米仪器，动力学为酉
    aligned=True 时 U_{i+1:i} = u_{i+1}·u_i†，此时每个 Q_i 都在 u_i 基下对角
    """
    bases = [random_unitary(rng, d) for _ in range(n)]
    dynamics = tuple(
        KrausSet.unitary(bases[i + 1] @ bases[i].conj().T if aligned else random_unitary(rng, d), "unitary")
        for i in range(n - 1)
    )
    return MarkovProcess(
        initial=random_state(rng, d),
        dynamics=dynamics,
        instruments=tuple(basis_instrument(rng, u, int(rng.integers(2, 4))) for u in bases),
        name="hermitian-chain",
    )


class ProcessFactory:
    """测试中使用的随机过程工厂"""
    state = staticmethod(random_state)
    unitary = staticmethod(random_unitary)
    kraus = staticmethod(random_kraus)
    instrument = staticmethod(random_instrument)
    hermitian_instrument = staticmethod(random_hermitian_instrument)
    channel = staticmethod(random_channel)
    stochastic_channel = staticmethod(stochastic_channel)
    diagonal_instrument = staticmethod(diagonal_instrument)
    process = staticmethod(random_process)
    classical_process = staticmethod(classical_process)
    fixed_basis_process = staticmethod(fixed_basis_process)
    support_restricted_process = staticmethod(support_restricted_process)
    hermitian_chain_process = staticmethod(hermitian_chain_process)


# ==================== fixture ====================


@pytest.fixture(scope="session")
def factory() -> ProcessFactory:
    return ProcessFactory()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def scenario():
    """按场景名返回内置场景的 MarkovProcess"""
    return lambda scenario_id: load_scenario(scenario_id).process


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch):
    """每个用例使用默认配置，不受外部环境变量影响"""
    monkeypatch.delenv("MTC_CONFIG", raising=False)
    monkeypatch.delenv("MTC_TOLERANCE", raising=False)
    ConfigManager.reset()
    yield
    ConfigManager.reset()
