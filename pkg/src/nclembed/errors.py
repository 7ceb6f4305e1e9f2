"""Exception hierarchy.  Every error carries a machine-greppable reason code."""
from __future__ import annotations


class EmbeddingToolError(Exception):
    reason = "ERROR"


class TptpSyntaxError(EmbeddingToolError):
    reason = "PARSE_ERROR"

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 token: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class IncludeError(EmbeddingToolError):
    reason = "INCLUDE_ERROR"


class AmbiguousLogicSpecError(EmbeddingToolError):
    reason = "AMBIGUOUS_LOGIC_SPEC"


class UnsupportedLogicError(EmbeddingToolError):
    reason = "UNSUPPORTED_LOGIC"


class UnsupportedParameterError(EmbeddingToolError):
    reason = "UNSUPPORTED_PARAMETER"


class UnknownParameterError(UnsupportedParameterError):
    pass


class MissingParameterError(UnsupportedParameterError):
    pass


class MalformedLogicSpecError(UnsupportedParameterError):
    pass


class UnsupportedConnectiveError(EmbeddingToolError):
    reason = "UNSUPPORTED_CONNECTIVE"


class MalformedConnectiveError(EmbeddingToolError):
    reason = "MALFORMED_CONNECTIVE"


class NotPropositionalError(EmbeddingToolError):
    reason = "NOT_PROPOSITIONAL"


class HolTypeError(EmbeddingToolError):
    reason = "TYPE_ERROR"


class BudgetExceededError(EmbeddingToolError):
    reason = "BUDGET_EXCEEDED"


class OracleError(EmbeddingToolError):
    """The oracle cannot handle the problem (outside its fragment)."""

    reason = "UNSUPPORTED_LOGIC"


class InputOutputError(EmbeddingToolError):
    reason = "IO_ERROR"
