# @time:    2026-03-10
"""
opmat 单元测试与性质测试
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mtc.core.errors import (
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteError,
    NotHermitianError,
    NotPositiveSemidefiniteError,
)
from mtc.core.opmat import (
    abs_value,
    as_matrix,
    commutator,
    hadamard,
    herm_eig,
    hs_inner,
    hs_norm,
    identity,
    is_hermitian,
    ket,
    pauli,
    polar_decompose,
    projector,
    psd_sqrt,
    qubit_state,
    span_of_spectra,
    subspace_contains,
    subspace_span,
)

HYPOTHESIS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

entries = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def _complex(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    return re + 1j * im


class TestNamedOperators:
    """命名算子"""

    def test_pauli_algebra(self):
        """σ_x σ_y = i σ_z，[σ_x, σ_z] = -2i σ_y"""
        x, y, z = pauli("x"), pauli("y"), pauli("z")

        # 断言
        assert np.allclose(x @ y, 1j * z)
        assert np.allclose(commutator(x, z), -2j * y)
        assert np.allclose(pauli("sigma_x"), x)

    @seed(5)
    @HYPOTHESIS
    @given(
        re=arrays(np.float64, (2, 3, 3), elements=entries),
        im=arrays(np.float64, (2, 3, 3), elements=entries),
    )
    def test_commutator_adjoint(self, re, im):
        """[A, B]† = [B†, A†]"""
        a, b = _complex(re, im)
        scale = max(1.0, np.abs(a).max() * np.abs(b).max())
        lhs = commutator(a, b).conj().T
        rhs = commutator(b.conj().T, a.conj().T)
        assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * scale)

    def test_hadamard_maps_computational_to_x_basis(self):
        """H|0⟩ = |+⟩"""
        assert np.allclose(hadamard() @ ket(2, 0), qubit_state("+"))
        assert np.allclose(hadamard() @ hadamard(), identity(2))

    def test_projector_normalizes(self):
        """非归一化向量的投影仍为秩一投影"""
        p = projector([3.0, 4.0j])

        # 断言
        assert np.allclose(p @ p, p)
        assert np.isclose(np.trace(p).real, 1.0)

    def test_as_matrix_rejects_bad_input(self):
        """非方阵与非有限元素被拒绝"""
        with pytest.raises(DimensionMismatchError):
            as_matrix(np.ones((2, 3)))
        with pytest.raises(NonFiniteError):
            as_matrix([[np.nan, 0], [0, 1]])

    def test_as_matrix_is_read_only(self):
        m = as_matrix([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            m[0, 0] = 2

    def test_hs_inner_and_norm(self):
        """⟨A, B⟩ = tr(A†B)，‖A‖² = ⟨A, A⟩"""
        a = np.array([[1, 2j], [0, 1]])
        b = np.array([[0, 1], [1, 0]])

        # 断言
        assert np.isclose(hs_inner(a, b), np.trace(a.conj().T @ b))
        assert np.isclose(hs_norm(a) ** 2, hs_inner(a, a).real)

    def test_is_hermitian(self):
        assert is_hermitian(pauli("y"))
        assert not is_hermitian([[0, 1], [0, 0]])


class TestSpectrum:
    """谱分解"""

    def test_degenerate_eigenvalues_are_grouped(self):
        """diag(2, 1, 1) 分为两组，秩 (1, 2)"""
        spectrum = herm_eig(np.diag([1.0, 2.0, 1.0]))

        # 断言
        assert spectrum.eigenvalues == pytest.approx((2.0, 1.0))
        assert spectrum.ranks == (1, 2)
        assert spectrum.is_degenerate

    def test_zero_matrix_is_one_projector(self):
        spectrum = herm_eig(np.zeros((2, 2)))
        assert spectrum.ranks == (2,)
        assert np.allclose(spectrum.projectors[0], identity(2))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            herm_eig([[0, 1], [0, 0]])

    @seed(1)
    @HYPOTHESIS
    @given(
        re=arrays(np.float64, (3, 3), elements=entries),
        im=arrays(np.float64, (3, 3), elements=entries),
    )
    def test_reconstruction(self, re, im):
        """Σ λ P 还原原矩阵，投影两两正交且和为单位阵"""
        g = _complex(re, im)
        h = (g + g.conj().T) / 2

        spectrum = herm_eig(h)

        scale = max(1.0, np.abs(h).max())
        assert np.allclose(spectrum.reconstruct(), h, atol=2e-8 * scale)
        assert np.allclose(sum(spectrum.projectors), identity(3), atol=1e-9)
        assert list(spectrum.eigenvalues) == sorted(spectrum.eigenvalues, reverse=True)


class TestSquareRootAndPolar:
    """平方根、绝对值与极分解"""

    def test_psd_sqrt_rejects_negative(self):
        with pytest.raises(NotPositiveSemidefiniteError):
            psd_sqrt(np.diag([1.0, -0.5]))

    def test_abs_value_of_pauli_commutator(self):
        """|[|0⟩⟨0|, |+⟩⟨+|]| = ½·1"""
        c = commutator(projector(ket(2, 0)), projector(qubit_state("+")))
        assert np.allclose(abs_value(c), 0.5 * identity(2))

    @seed(2)
    @HYPOTHESIS
    @given(
        re=arrays(np.float64, (3, 3), elements=entries),
        im=arrays(np.float64, (3, 3), elements=entries),
    )
    def test_sqrt_squares_back(self, re, im):
        g = _complex(re, im)
        p = g @ g.conj().T
        root = psd_sqrt(p)
        scale = max(1.0, np.abs(p).max())
        assert np.allclose(root @ root, p, atol=1e-8 * scale)
        assert is_hermitian(root, 1e-9 * scale)

    @seed(3)
    @HYPOTHESIS
    @given(
        re=arrays(np.float64, (3, 3), elements=entries),
        im=arrays(np.float64, (3, 3), elements=entries),
    )
    def test_polar_decomposition(self, re, im):
        """X = V|X|，V 酉"""
        x = _complex(re, im)
        v, m = polar_decompose(x)
        scale = max(1.0, hs_norm(x))
        assert np.allclose(v @ m, x, rtol=0, atol=1e-9 * scale)
        assert np.allclose(v.conj().T @ v, identity(3), rtol=0, atol=1e-9)
        assert np.allclose(m, abs_value(x), rtol=0, atol=1e-9 * scale)

    @pytest.mark.parametrize("case", ["diag", "rank_one", "zero"])
    def test_polar_decomposition_of_singular_matrix(self, rng, case):
        """X 奇异时 V 在核上补全为酉矩阵，且重复调用结果相同"""
        if case == "diag":
            x = np.diag([1.0, 0.0, 0.0]).astype(np.complex128)
        elif case == "rank_one":
            a = rng.normal(size=3) + 1j * rng.normal(size=3)
            b = rng.normal(size=3) + 1j * rng.normal(size=3)
            x = np.outer(a, b.conj())
        else:
            x = np.zeros((3, 3), dtype=np.complex128)

        # 执行
        v, m = polar_decompose(x)
        v_again, m_again = polar_decompose(x)

        # 断言
        tol = 1e-9 * max(hs_norm(x), 1e-12)
        assert np.linalg.matrix_rank(x) < 3
        assert np.allclose(v @ m, x, rtol=0, atol=tol)
        assert np.allclose(v.conj().T @ v, identity(3), rtol=0, atol=1e-9)
        assert np.array_equal(v, v_again)
        assert np.array_equal(m, m_again)


class TestSubspace:
    """算子子空间"""

    def test_span_rank_and_projection(self):
        """span{|0⟩⟨0|, |1⟩⟨1|, 1} 的秩为 2，σ_x 不在其中"""
        space = subspace_span([projector(ket(2, 0)), projector(ket(2, 1)), identity(2)])

        # 断言
        assert space.rank == 2
        assert np.allclose(space.gram(), np.eye(2))
        assert space.residual(pauli("z")) < 1e-12
        assert space.residual(pauli("x")) == pytest.approx(np.sqrt(2))

    def test_empty_span_is_rejected(self):
        with pytest.raises(EmptyInputError):
            subspace_span([])

    def test_containment(self):
        """z 基投影的谱张成包含于对角矩阵空间，x 基的不包含"""
        diagonal = subspace_span([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        z_space = span_of_spectra([herm_eig(pauli("z"))])
        x_space = span_of_spectra([herm_eig(pauli("x"))])

        # 断言
        assert subspace_contains(diagonal, z_space)[0]
        contained, residual = subspace_contains(diagonal, x_space)
        assert not contained
        assert residual > 0.1

    @seed(4)
    @HYPOTHESIS
    @given(
        re=arrays(np.float64, (3, 2, 2), elements=entries),
        im=arrays(np.float64, (3, 2, 2), elements=entries),
        target_re=arrays(np.float64, (2, 2), elements=entries),
    )
    def test_projection_is_idempotent(self, re, im, target_re):
        ops = list(_complex(re, im))
        if max(hs_norm(o) for o in ops) < 1e-3:
            return
        space = subspace_span(ops)
        once = space.project(target_re)
        scale = max(1.0, np.abs(target_re).max())
        assert np.allclose(space.project(once), once, atol=1e-9 * scale)
        assert space.residual(once) < 1e-9 * scale

    @seed(6)
    @HYPOTHESIS
    @given(
        re=arrays(np.float64, (3, 2, 2), elements=entries),
        im=arrays(np.float64, (3, 2, 2), elements=entries),
    )
    def test_subspace_contains_itself(self, re, im):
        """S ⊆ S，残差不超过 1e-12"""
        space = subspace_span(list(_complex(re, im)))

        contained, residual = subspace_contains(space, space)

        # 断言
        assert contained
        assert residual <= 1e-12
