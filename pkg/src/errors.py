"""统一的领域异常。

每个异常带一个稳定的 ``code``（CLI 输出与测试依赖它），以及可选的 ``details``。
命令层把它们转换成 ``{'success': False, 'error': {...}}``。
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional


class EssFieldError(Exception):
    code = "essfield_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class InvalidInputError(EssFieldError, ValueError):
    code = "invalid_input"


class NumericFailureError(EssFieldError):
    """迭代/积分未收敛；``partial`` 保存中间结果（例如未收敛的根近似）。"""

    code = "numeric_failure"

    def __init__(self, message: str, partial: Any = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.partial = partial


class PoleEvaluationError(EssFieldError):
    code = "pole_evaluation"


class RangeOverflowError(EssFieldError, ArithmeticError):
    code = "range_overflow"


class InvalidFieldError(EssFieldError):
    code = "invalid_field"

    def __init__(self, message: str, diagnostics: Optional[List[Any]] = None):
        super().__init__(message, {"diagnostics": [str(d) for d in (diagnostics or [])]})
        self.diagnostics = list(diagnostics or [])


class UnsupportedGaugeError(EssFieldError):
    code = "unsupported_gauge"


class SpecRejectionError(EssFieldError):
    code = "spec_rejected"


class NotSymmetricError(EssFieldError):
    code = "not_symmetric"


class NoSymmetryError(EssFieldError):
    code = "no_symmetry"


class InvalidGermError(EssFieldError):
    code = "invalid_germ"


class PathRejectionError(EssFieldError):
    code = "path_rejected"


class SeedRejectionError(EssFieldError):
    code = "seed_rejected"


class ParseError(EssFieldError, ValueError):
    code = "parse_error"

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}", {"location": location})
        self.location = location


class ValidationError(EssFieldError, ValueError):
    code = "validation_error"

    def __init__(self, message: str, diagnostics: Optional[List[Any]] = None):
        super().__init__(message, {"diagnostics": [str(d) for d in (diagnostics or [])]})
        self.diagnostics = list(diagnostics or [])
