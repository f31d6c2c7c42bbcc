# @time:    2026-03-10
"""
多时刻统计引擎：与逐路径求和的对照实现做差分测试
"""

import itertools

import numpy as np
import pytest

from mtc.core.errors import InvalidSequenceError, InvalidTimeError
from mtc.core.opmat import identity
from mtc.core.process import Instrument, MarkovProcess, OutcomeSequence
from mtc.core.stats import (
    full_distribution,
    futures,
    histories,
    joint_prob,
    kraus_path_probability,
    marginalize,
    post_measurement_operator,
    pre_measurement_state,
    sequence_prob,
    split_prob,
)


def _process_for(factory, seed: int):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    n = int(rng.integers(2, 4))
    return factory.process(rng, d, n)


def _all_sequences(p):
    return [OutcomeSequence.consecutive(combo) for combo in itertools.product(*(p.outcomes(t) for t in range(1, p.n + 1)))]


class TestJointProbability:
    """量子回归公式"""

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_kraus_path_sum(self, factory, seed):
        """与对动力学 Kraus 路径逐一求和的结果一致"""
        p = _process_for(factory, seed)

        for seq in _all_sequences(p):
            assert joint_prob(p, seq) == pytest.approx(kraus_path_probability(p, seq), abs=1e-12)

    @pytest.mark.parametrize("seed", range(30))
    def test_split_at_every_time(self, factory, seed):
        """tr[ρ̃_i K† Q_i K] 在任意分割点都等于联合概率"""
        p = _process_for(factory, seed)

        for seq in _all_sequences(p):
            expected = joint_prob(p, seq)
            for i in range(1, p.n + 1):
                assert split_prob(p, i, seq) == pytest.approx(expected, abs=1e-12)

    def test_sequence_must_cover_all_times(self, factory, rng):
        p = factory.process(rng, 2, 3)
        with pytest.raises(InvalidSequenceError):
            joint_prob(p, OutcomeSequence(((1, p.outcomes(1)[0]), (3, p.outcomes(3)[0]))))

    def test_sequence_prob_skips_unmeasured_times(self, factory, rng):
        """跳过的时刻等价于在该时刻插入不做测量的仪器"""
        p = factory.process(rng, 2, 3)
        q = MarkovProcess(p.initial, p.dynamics, (p.instrument(1), Instrument.trivial(2), p.instrument(3)))
        m1, m3 = p.outcomes(1)[-1], p.outcomes(3)[0]

        skipped = sequence_prob(p, OutcomeSequence(((1, m1), (3, m3))))
        with_trivial = joint_prob(q, OutcomeSequence(((1, m1), (2, "*"), (3, m3))))

        assert skipped == pytest.approx(with_trivial, abs=1e-12)


class TestConditionedQuantities:
    """ρ̃_i 与 Q_i"""

    def test_first_state_is_initial(self, factory, rng):
        p = factory.process(rng, 3, 2)
        state = pre_measurement_state(p, 1, OutcomeSequence())
        assert np.allclose(state.state.mat, p.initial.mat)
        assert state.probability == pytest.approx(1.0)

    def test_last_operator_is_identity(self, factory, rng):
        p = factory.process(rng, 2, 3)
        post = post_measurement_operator(p, 3, OutcomeSequence())
        assert np.allclose(post.op, identity(2))

    @pytest.mark.parametrize("seed", range(20))
    def test_history_probability_is_trace(self, factory, seed):
        """tr ρ̃_i(历史) = ℙ(历史)"""
        p = _process_for(factory, seed)
        for h in histories(p, p.n):
            state = pre_measurement_state(p, p.n, h)
            assert state.probability == pytest.approx(sequence_prob(p, h), abs=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_future_operators_sum_to_identity(self, factory, seed):
        """Σ_未来 Q_i(未来) = 1（各仪器完备）"""
        p = _process_for(factory, seed)
        total = sum(post_measurement_operator(p, 1, f).op for f in futures(p, 1))
        assert np.allclose(total, identity(p.dim), atol=1e-10)

    def test_history_must_match_times(self, factory, rng):
        p = factory.process(rng, 2, 3)
        with pytest.raises(InvalidSequenceError):
            pre_measurement_state(p, 3, OutcomeSequence(((2, p.outcomes(2)[0]),)))

    def test_enumeration_is_lexicographic(self, scenario):
        p = scenario("inclusion-ex4")
        assert [f.labels for f in futures(p, 1)] == [("+", "0"), ("+", "1"), ("-", "0"), ("-", "1")]
        assert histories(p, 1) == [OutcomeSequence()]


class TestFullDistribution:
    """联合分布"""

    @pytest.mark.parametrize("seed", range(20))
    def test_sums_to_one(self, factory, seed):
        p = _process_for(factory, seed)
        assert full_distribution(p).total() == pytest.approx(1.0, abs=1e-10)
        assert full_distribution(p, [p.n]).total() == pytest.approx(1.0, abs=1e-10)

    def test_entries_match_joint_prob(self, factory, rng):
        p = factory.process(rng, 3, 3)
        dist = full_distribution(p)

        for seq in _all_sequences(p):
            assert dist.probability(seq.labels) == pytest.approx(joint_prob(p, seq), abs=1e-12)
        assert len(dist) == len(_all_sequences(p))

    def test_no_measurement(self, factory, rng):
        """measure_at 为空时只有一个空结果，概率 1"""
        dist = full_distribution(factory.process(rng, 2, 2), [])
        assert dict(dist.items()) == pytest.approx({(): 1.0})

    def test_parallel_matches_serial(self, factory, rng):
        p = factory.process(rng, 3, 3, max_outcomes=3)

        serial = full_distribution(p)
        parallel = full_distribution(p, workers=4)

        # 断言
        assert parallel.times == serial.times
        assert list(parallel.table) == list(serial.table)
        for key, value in serial.items():
            assert parallel.table[key] == pytest.approx(value, abs=1e-15)

    def test_lookup_by_time(self, scenario):
        dist = full_distribution(scenario("weak-comm-ex2"))
        assert dist.probability({1: "+", 2: "0"}) == pytest.approx(0.25)
        with pytest.raises(InvalidSequenceError):
            dist.probability(("0", "0"))

    def test_unknown_time(self, factory, rng):
        with pytest.raises(InvalidTimeError):
            full_distribution(factory.process(rng, 2, 2), [3])


class TestMarginalize:
    """边缘化"""

    def test_marginal_of_last_time_is_shorter_distribution(self, factory, rng):
        """对最后一个时刻求和等价于不测量最后时刻（后续不再有测量）"""
        p = factory.process(rng, 2, 3)
        full = full_distribution(p)

        marginal = marginalize(full, 3)
        shorter = full_distribution(p, [1, 2])

        # 断言
        assert marginal.times == (1, 2)
        for key, value in shorter.items():
            assert marginal.probability(key) == pytest.approx(value, abs=1e-12)

    def test_marginalize_unmeasured_time(self, factory, rng):
        dist = full_distribution(factory.process(rng, 2, 3), [1, 3])
        with pytest.raises(InvalidTimeError):
            marginalize(dist, 2)

    def test_classical_process_is_non_invasive(self, factory, rng):
        """经典过程上，对任意时刻边缘化都等于跳过该时刻"""
        p = factory.classical_process(rng, 3, 3)
        full = full_distribution(p)

        for i in (1, 2, 3):
            rest = [t for t in (1, 2, 3) if t != i]
            skipped = full_distribution(p, rest)
            marginal = marginalize(full, i)
            for key, value in skipped.items():
                assert marginal.probability(key) == pytest.approx(value, abs=1e-12)
