"""
Error hierarchy shared by every package.

Each error carries a machine-readable ``code`` (used in CLI/API JSON) and a
human-readable message.
"""
from typing import Any, Dict, Optional


class DeskError(Exception):
    """Base class for all library errors"""
    code = "desk_error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = {k: _plain(v) for k, v in self.details.items()}
        return payload


def _plain(value: Any) -> Any:
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


class ParseError(DeskError):
    code = "parse_error"

    def __init__(self, message: str, position: Optional[int] = None, **details: Any):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message, position=position, **details)
        self.position = position


class ValidationError(DeskError):
    """An input violates a named invariant"""
    code = "validation_error"

    def __init__(self, message: str, invariant: str, **details: Any):
        super().__init__(f"{message} [invariant: {invariant}]", invariant=invariant, **details)
        self.invariant = invariant


class DepthCapExceeded(DeskError):
    code = "depth_cap_exceeded"


class RefinementBudgetExhausted(DeskError):
    code = "refinement_budget_exhausted"


class DomainEscape(DeskError):
    """A tabulated function was evaluated outside its table"""
    code = "domain_escape"


class BudgetExceeded(DeskError):
    code = "budget_exceeded"


class TableExhausted(DeskError):
    code = "table_exhausted"

    def __init__(self, message: str, deepest_index: int, **details: Any):
        super().__init__(message, deepest_index=deepest_index, **details)
        self.deepest_index = deepest_index


class SettlingCapExceeded(DeskError):
    code = "settling_cap_exceeded"


class MalformedBlocks(DeskError):
    code = "malformed_blocks"

    def __init__(self, message: str, position: int, **details: Any):
        super().__init__(f"{message} (at bit {position})", position=position, **details)
        self.position = position


class IndeterminateChoice(DeskError):
    code = "indeterminate_choice"


class VerificationFailure(DeskError):
    code = "verification_failure"
