# @time:    2026-03-02
"""
复算子代数

矩阵运算、厄米谱分解、矩阵绝对值、极分解，以及 Hilbert–Schmidt 内积 ⟨A,B⟩ = tr(A†B) 下的算子子空间。
所有范数均为 Frobenius（Hilbert–Schmidt）范数；所有容差默认为绝对容差。
返回的矩阵为只读 complex128 数组，函数均无副作用。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from mtc.core.errors import (
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteError,
    NotHermitianError,
    NotPositiveSemidefiniteError,
)
from mtc.core.log_manager import log

DEFAULT_TOL = 1e-9
DEFAULT_DEGENERACY_TOL = 1e-8

ComplexMatrix = NDArray[np.complex128]

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# 单比特命名态
QUBIT_STATES = {
    "0": (1.0, 0.0),
    "1": (0.0, 1.0),
    "+": (_SQRT_HALF, _SQRT_HALF),
    "-": (_SQRT_HALF, -_SQRT_HALF),
    "+i": (_SQRT_HALF, 1j * _SQRT_HALF),
    "-i": (_SQRT_HALF, -1j * _SQRT_HALF),
}

_PAULI = {
    "x": ((0, 1), (1, 0)),
    "y": ((0, -1j), (1j, 0)),
    "z": ((1, 0), (0, -1)),
}


def _frozen(arr: np.ndarray) -> ComplexMatrix:
    arr.setflags(write=False)
    return arr


def as_matrix(a: ArrayLike, name: str = "matrix") -> ComplexMatrix:
    """转换为只读 d×d complex128 矩阵，检查形状与有限性"""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatchError(
            f"{name} 必须是非空方阵，实际形状 {arr.shape}",
            {"name": name, "shape": list(arr.shape)},
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} 含有 NaN 或 Inf", {"name": name})
    return _frozen(arr)


def _same_dim(a: ComplexMatrix, b: ComplexMatrix, what: str) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"{what}: 维度不一致 {a.shape} vs {b.shape}",
            {"left": list(a.shape), "right": list(b.shape)},
        )


# ==================== 命名算子 ====================


def identity(d: int) -> ComplexMatrix:
    return _frozen(np.eye(d, dtype=np.complex128))


def zeros(d: int) -> ComplexMatrix:
    return _frozen(np.zeros((d, d), dtype=np.complex128))


def pauli(name: str) -> ComplexMatrix:
    key = name.lower().removeprefix("sigma_")
    if key not in _PAULI:
        raise ValueError(f"未知 Pauli 矩阵: {name}")
    return as_matrix(_PAULI[key], f"sigma_{key}")


def hadamard() -> ComplexMatrix:
    return as_matrix(np.array([[1, 1], [1, -1]]) * _SQRT_HALF, "hadamard")


def ket(d: int, k: int) -> NDArray[np.complex128]:
    """计算基矢 |k⟩（k 从 0 开始）"""
    if not 0 <= k < d:
        raise ValueError(f"基矢下标越界: k={k}, d={d}")
    vec = np.zeros(d, dtype=np.complex128)
    vec[k] = 1.0
    return vec


def qubit_state(label: str) -> NDArray[np.complex128]:
    if label not in QUBIT_STATES:
        raise ValueError(f"未知单比特态: {label}，可选 {list(QUBIT_STATES)}")
    return np.array(QUBIT_STATES[label], dtype=np.complex128)


def projector(vector: ArrayLike) -> ComplexMatrix:
    """|v⟩⟨v|，v 不做归一化"""
    vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return as_matrix(np.outer(vec, vec.conj()), "projector")


# ==================== 基本运算 ====================


def adjoint(a: ArrayLike) -> ComplexMatrix:
    m = as_matrix(a)
    return _frozen(m.conj().T.copy())


def commutator(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """[A, B] = AB − BA"""
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b, "commutator")
    return _frozen(a @ b - b @ a)


def hs_inner(a: ArrayLike, b: ArrayLike) -> complex:
    """Hilbert–Schmidt 内积 tr(A†B)"""
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b, "hs_inner")
    return complex(np.vdot(a, b))


def hs_norm(a: ArrayLike) -> float:
    return float(np.linalg.norm(np.asarray(a), "fro"))


def is_hermitian(a: ArrayLike, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(a)
    return hs_norm(m - m.conj().T) <= tol * max(1.0, hs_norm(m))


def hermitian_part(a: ArrayLike) -> ComplexMatrix:
    m = as_matrix(a)
    return _frozen((m + m.conj().T) / 2)


# ==================== 谱分解 ====================


@dataclass(frozen=True)
class HermitianSpectrum:
    """按简并分组后的谱分解 H = Σ_μ λ_μ P_μ，本征值严格降序"""
    eigenvalues: tuple[float, ...]
    projectors: tuple[ComplexMatrix, ...]

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    @property
    def is_degenerate(self) -> bool:
        return any(r > 1 for r in self.ranks)

    def reconstruct(self) -> ComplexMatrix:
        total = sum((lam * p for lam, p in zip(self.eigenvalues, self.projectors)), zeros(self.dim))
        return _frozen(np.asarray(total, dtype=np.complex128))


def herm_eig(
    h: ArrayLike,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
    tol: float = DEFAULT_TOL,
) -> HermitianSpectrum:
    """
    厄米矩阵谱分解，本征值与所在簇首个本征值之差小于 degeneracy_tol 时合并为同一投影。
    :param h: 厄米矩阵（容差 tol 内）
    :param degeneracy_tol: 简并分组阈值（绝对值）
    :param tol: 厄米性检查容差
    """
    m = as_matrix(h, "H")
    if not is_hermitian(m, tol):
        log.error("herm_eig 输入不是厄米矩阵")
        raise NotHermitianError("herm_eig 输入不是厄米矩阵", {"residual": hs_norm(m - m.conj().T)})

    w, v = linalg.eigh(hermitian_part(m))
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    clusters: list[list[int]] = []
    for k, lam in enumerate(w):
        if clusters and w[clusters[-1][0]] - lam < degeneracy_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])

    eigenvalues = tuple(float(np.mean(w[c])) for c in clusters)
    projectors = tuple(_frozen(v[:, c] @ v[:, c].conj().T) for c in clusters)
    return HermitianSpectrum(eigenvalues=eigenvalues, projectors=projectors)


def psd_sqrt(p: ArrayLike, tol: float = DEFAULT_TOL) -> ComplexMatrix:
    """半正定矩阵的平方根；[−tol, 0) 内的本征值截断为 0"""
    m = as_matrix(p, "P")
    if not is_hermitian(m, tol):
        raise NotHermitianError("psd_sqrt 输入不是厄米矩阵")
    w, v = linalg.eigh(hermitian_part(m))
    scale = max(1.0, float(np.max(np.abs(w))))
    if w.min() < -tol * scale:
        log.error(f"psd_sqrt 输入存在负本征值: {w.min():.3e}")
        raise NotPositiveSemidefiniteError(
            f"psd_sqrt 输入不是半正定矩阵，最小本征值 {w.min():.3e}",
            {"min_eigenvalue": float(w.min())},
        )
    w = np.clip(w, 0.0, None)
    return _frozen((v * np.sqrt(w)) @ v.conj().T)


def abs_value(x: ArrayLike) -> ComplexMatrix:
    """|X| = √(X†X)；由奇异值分解 X = UΣW† 取 WΣW†，零奇异方向上保持为零"""
    m = as_matrix(x, "X")
    _, s, wh = linalg.svd(m)
    return hermitian_part((wh.conj().T * s) @ wh)


def polar_decompose(x: ArrayLike) -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    右极分解 X = V·M，V 酉、M = |X|。
    X 奇异时 V 由奇异值分解中左右奇异向量按下标配对补全，结果确定。
    """
    m = as_matrix(x, "X")
    v, p = linalg.polar(m, side="right")
    return _frozen(np.asarray(v, dtype=np.complex128)), hermitian_part(p)


# ==================== 算子子空间 ====================


@dataclass(frozen=True)
class OperatorSubspace:
    """Hilbert–Schmidt 正交归一基张成的算子子空间"""
    dim: int
    basis: tuple[ComplexMatrix, ...]

    def __post_init__(self):
        if len(self.basis) > self.dim ** 2:
            raise ValueError(f"基的数目 {len(self.basis)} 超过 d² = {self.dim ** 2}")
        for b in self.basis:
            if b.shape != (self.dim, self.dim):
                raise DimensionMismatchError(f"基元素维度 {b.shape} 与 d={self.dim} 不一致")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> NDArray[np.complex128]:
        flat = np.array([b.reshape(-1) for b in self.basis], dtype=np.complex128).reshape(self.rank, self.dim ** 2)
        return flat.conj() @ flat.T

    def project(self, x: ArrayLike) -> ComplexMatrix:
        m = as_matrix(x)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatchError(f"算子维度 {m.shape} 与子空间 d={self.dim} 不一致")
        out = np.zeros_like(m)
        for b in self.basis:
            out = out + np.vdot(b, m) * b
        return _frozen(out)

    def residual(self, x: ArrayLike) -> float:
        """X 在子空间正交补上的分量范数"""
        return hs_norm(as_matrix(x) - self.project(x))


def subspace_span(ops: Sequence[ArrayLike], rank_tol: float = DEFAULT_TOL) -> OperatorSubspace:
    """
    复线性张成的正交归一基（奇异值分解做秩判定，丢弃奇异值 ≤ rank_tol 的方向）
    """
    mats = [as_matrix(o) for o in ops]
    if not mats:
        log.error("subspace_span 输入为空")
        raise EmptyInputError("subspace_span 需要至少一个算子")
    d = mats[0].shape[0]
    for m in mats[1:]:
        _same_dim(mats[0], m, "subspace_span")

    stacked = np.stack([m.reshape(-1) for m in mats], axis=1)
    u, s, _ = linalg.svd(stacked, full_matrices=False)
    rank = int(np.sum(s > rank_tol))
    basis = tuple(_frozen(u[:, k].reshape(d, d).copy()) for k in range(rank))
    return OperatorSubspace(dim=d, basis=basis)


def subspace_contains(
    outer: OperatorSubspace,
    inner: OperatorSubspace,
    tol: float = DEFAULT_TOL,
) -> tuple[bool, float]:
    """inner ⊆ outer：返回 (是否包含, inner 各基元素投影残差的最大值)"""
    if outer.dim != inner.dim:
        raise DimensionMismatchError(
            f"子空间维度不一致: {outer.dim} vs {inner.dim}",
            {"outer": outer.dim, "inner": inner.dim},
        )
    residual = max((outer.residual(b) for b in inner.basis), default=0.0)
    return residual < tol, residual


def span_of_spectra(spectra: Iterable[HermitianSpectrum], rank_tol: float = DEFAULT_TOL) -> OperatorSubspace:
    """一组谱分解的全部投影张成的子空间"""
    projectors = [p for s in spectra for p in s.projectors]
    return subspace_span(projectors, rank_tol)
