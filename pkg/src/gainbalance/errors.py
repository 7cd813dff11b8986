"""Shared exception types."""


class GraphError(ValueError):
    """Structural misuse: bad endpoints, invalid walk, not a basis, ..."""


class ParseError(ValueError):
    """Malformed input text.  Carries line information when available."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BudgetError(RuntimeError):
    """A configured search or enumeration budget was exceeded."""
