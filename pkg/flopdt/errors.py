"""Exception hierarchy shared by every engine module."""

from __future__ import annotations

from typing import Any, Dict, Optional


class FlopDTError(Exception):
    """Base error; carries a stable code and a JSON-compatible details dict."""

    code = "engine_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = dict(details or {})

    def to_payload(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "details": self.message}
        if self.details:
            payload.update(self.details)
        return payload


class ConfigurationError(FlopDTError):
    code = "configuration_error"


class DomainError(FlopDTError):
    code = "domain_error"


class RangeError(FlopDTError):
    """Coefficient requested outside the truncation: unknown, not zero."""

    code = "range_error"


class NonGoodPathError(FlopDTError):
    code = "non_good_path"

    def __init__(
        self,
        message: str,
        offending: Optional[Any] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        merged = dict(details or {})
        if offending is not None:
            merged.setdefault("offending_class", offending)
        super().__init__(message, merged)
        self.offending = offending


class WallConsistencyError(FlopDTError):
    code = "wall_consistency"


class ProviderError(FlopDTError):
    code = "provider_error"


class OracleLimitError(FlopDTError):
    code = "oracle_limit"


class FitError(FlopDTError):
    code = "fit_error"
