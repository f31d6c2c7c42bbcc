# @time:    2026-03-10
"""
process 数据模型与校验
"""

import numpy as np
import pytest

from mtc.core.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidSequenceError,
    InvalidTimeError,
    UnknownOutcomeError,
)
from mtc.core.opmat import hadamard, identity, ket, projector, qubit_state
from mtc.core.process import (
    DensityMatrix,
    Instrument,
    KrausSet,
    MarkovProcess,
    OutcomeSequence,
    apply_adjoint_map,
    apply_map,
    instrument_total_adjoint,
    operator_basis_states,
    validate_process,
)


def _qubit_process(instrument: Instrument | None = None, initial: DensityMatrix | None = None) -> MarkovProcess:
    z = Instrument.projective([ket(2, 0), ket(2, 1)])
    return MarkovProcess(
        initial=initial or DensityMatrix.pure(ket(2, 0)),
        dynamics=(KrausSet.unitary(hadamard(), "hadamard"),),
        instruments=(instrument or z, z),
        name="qubit",
    )


class TestDensityMatrix:
    """密度矩阵"""

    def test_pure_state_is_normalized(self):
        rho = DensityMatrix.pure([1.0, 1.0j])
        assert rho.trace == pytest.approx(1.0)
        assert rho.issues() == []

    def test_zero_vector_is_rejected(self):
        with pytest.raises(EmptyInputError):
            DensityMatrix.pure([0.0, 0.0])

    def test_issues_are_reported(self):
        """非厄米、非正定、迹不为 1 分别给出"""
        assert DensityMatrix([[1, 1], [0, 0]]).issues() == ["not Hermitian"]
        assert "not positive semidefinite" in DensityMatrix(np.diag([1.5, -0.5])).issues()[0]
        assert DensityMatrix(np.diag([0.5, 0.25])).issues() == ["trace 0.75 != 1"]
        assert DensityMatrix(np.diag([0.5, 0.25]), normalized=False).issues() == []

    def test_maximally_mixed(self):
        assert np.allclose(DensityMatrix.maximally_mixed(3).mat, identity(3) / 3)


class TestChannelsAndInstruments:
    """CPTP 映射与仪器"""

    def test_apply_map_preserves_trace(self, factory, rng):
        channel = factory.channel(rng, 3, 2)
        rho = factory.state(rng, 3)

        out = apply_map(channel, rho)

        assert out.trace == pytest.approx(1.0)
        assert out.issues(1e-9) == []

    def test_adjoint_map_is_dual(self, factory, rng):
        """tr(Λ[ρ] Q) = tr(ρ Λ†[Q])"""
        channel = factory.channel(rng, 2, 3)
        rho = factory.state(rng, 2)
        q = projector(qubit_state("+i"))

        lhs = np.trace(apply_map(channel, rho).mat @ q)
        rhs = np.trace(rho.mat @ apply_adjoint_map(channel, q))

        assert lhs == pytest.approx(rhs)

    def test_kraus_set_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            KrausSet((identity(2), identity(3)))

    def test_empty_kraus_set(self):
        with pytest.raises(EmptyInputError):
            KrausSet(())

    def test_instrument_labels_and_lookup(self):
        ins = Instrument.projective([qubit_state("+"), qubit_state("-")], ["+", "-"], name="x")

        # 断言
        assert ins.labels == ("+", "-")
        assert ins.completeness_residual() < 1e-12
        assert ins.is_hermitian()
        with pytest.raises(UnknownOutcomeError):
            ins.kraus("0")

    def test_instrument_rejects_bad_labels(self):
        with pytest.raises(InvalidSequenceError):
            Instrument([("a", identity(2)), ("a", identity(2))])
        with pytest.raises(EmptyInputError):
            Instrument({})

    def test_trivial_instrument(self):
        ins = Instrument.trivial(2)
        assert ins.labels == ("*",)
        assert np.allclose(instrument_total_adjoint(ins, projector(ket(2, 1))), projector(ket(2, 1)))

    def test_basis_assignment(self):
        """标签顺序与基矢顺序无关"""
        ins = Instrument.projective([ket(2, 1), ket(2, 0)], ["a", "b"])
        eye = list(np.eye(2))

        # 断言
        assert ins.basis_assignment(eye) == {"a": 1, "b": 0}
        assert Instrument.projective([qubit_state("+"), qubit_state("-")]).basis_assignment(eye) is None


class TestOutcomeSequence:
    """结果序列"""

    def test_times_must_increase(self):
        with pytest.raises(InvalidSequenceError):
            OutcomeSequence(((2, "0"), (1, "0")))
        with pytest.raises(InvalidSequenceError):
            OutcomeSequence(((0, "0"),))

    def test_consecutive_and_concat(self):
        seq = OutcomeSequence.consecutive(["0", "1"]) + OutcomeSequence(((4, "+"),))

        # 断言
        assert seq.times == (1, 2, 4)
        assert seq.labels == ("0", "1", "+")
        assert str(seq) == "t1=0, t2=1, t4=+"
        assert str(OutcomeSequence()) == "∅"


class TestMarkovProcess:
    """过程结构"""

    def test_structure(self):
        p = _qubit_process()

        # 断言
        assert (p.dim, p.n) == (2, 2)
        assert p.outcomes(2) == ("0", "1")
        with pytest.raises(InvalidTimeError):
            p.instrument(3)
        with pytest.raises(InvalidTimeError):
            p.dynamic(2)

    def test_dynamics_count_must_match(self):
        z = Instrument.projective([ket(2, 0), ket(2, 1)])
        with pytest.raises(InvalidSequenceError):
            MarkovProcess(DensityMatrix.pure(ket(2, 0)), (), (z, z))

    def test_dimension_mismatch(self):
        z3 = Instrument.projective(list(np.eye(3)))
        with pytest.raises(DimensionMismatchError):
            MarkovProcess(DensityMatrix.pure(ket(2, 0)), (), (z3,))

    def test_truncated_and_with_initial(self):
        p = _qubit_process()
        short = p.truncated(1)
        other = p.with_initial(DensityMatrix.maximally_mixed(2))

        # 断言
        assert short.n == 1 and short.dynamics == ()
        assert np.allclose(other.initial.mat, identity(2) / 2)
        assert other.instruments is p.instruments


class TestValidateProcess:
    """validate_process"""

    def test_valid_process(self):
        report = validate_process(_qubit_process())
        assert report.valid
        assert report.hermitian_instruments == [True, True]

    def test_incomplete_instrument(self):
        """{m: ½·1} 不完备"""
        report = validate_process(_qubit_process(instrument=Instrument({"m": identity(2) / 2})))

        # 断言
        assert not report.valid
        assert [issue.code for issue in report.issues] == ["INCOMPLETE_INSTRUMENT"]
        assert report.issues[0].component == "instrument[t1]"

    def test_non_cptp_dynamics_and_bad_state(self):
        z = Instrument.projective([ket(2, 0), ket(2, 1)])
        p = MarkovProcess(
            initial=DensityMatrix(np.diag([0.7, 0.7])),
            dynamics=(KrausSet((2 * identity(2),), name="amplify"),),
            instruments=(z, z),
        )

        codes = [issue.code for issue in validate_process(p).issues]

        assert codes == ["BAD_STATE", "NOT_CPTP"]

    def test_non_hermitian_flag(self, factory, rng):
        p = _qubit_process(instrument=factory.instrument(rng, 2, 2))
        report = validate_process(p)
        assert report.valid
        assert report.hermitian_instruments == [False, True]


def test_operator_basis_states_span_all_hermitian():
    """d² 个纯态线性无关"""
    states = operator_basis_states(3)
    stacked = np.array([s.mat.reshape(-1) for s in states])

    assert len(states) == 9
    assert np.linalg.matrix_rank(stacked) == 9
