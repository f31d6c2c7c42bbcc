"""
异常定义

所有异常都继承自 ValueError，并携带 error_code，
CLI 据此构建统一错误结构（见 mtc.cli.utils.build_error_payload）。
"""

from __future__ import annotations

from typing import Any


class MtcError(ValueError):
    """基础异常"""
    error_code = "MTC_ERROR"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class DimensionMismatchError(MtcError):
    error_code = "DIMENSION_MISMATCH"


class NotHermitianError(MtcError):
    error_code = "NOT_HERMITIAN"


class NotPositiveSemidefiniteError(MtcError):
    error_code = "NOT_PSD"


class EmptyInputError(MtcError):
    error_code = "EMPTY_INPUT"


class UnknownOutcomeError(MtcError):
    error_code = "UNKNOWN_OUTCOME"


class InvalidSequenceError(MtcError):
    error_code = "INVALID_SEQUENCE"


class InvalidTimeError(MtcError):
    error_code = "INVALID_TIME"


class NotOrthonormalError(MtcError):
    error_code = "NOT_ORTHONORMAL"


class NotFixedBasisProjectiveError(MtcError):
    error_code = "NOT_FIXED_BASIS_PROJECTIVE"


class MultiKrausElementError(MtcError):
    error_code = "MULTI_KRAUS_ELEMENT"


class UnknownScenarioError(MtcError):
    error_code = "UNKNOWN_SCENARIO"


class ProcessFileError(MtcError):
    """过程描述文件无效，diagnostics 中逐条列出违规项"""
    error_code = "INVALID_PROCESS_FILE"

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        self.diagnostics = list(diagnostics or [])
        super().__init__(message, {"diagnostics": self.diagnostics})


class NonFiniteError(MtcError):
    error_code = "NON_FINITE"


class InvalidProcessError(MtcError):
    """过程未通过 validate_process，issues 中为违规项"""
    error_code = "INVALID_PROCESS"
