"""Exception hierarchy shared by every pmfix module."""


class PmfixError(Exception):
    """Base class for all pmfix errors."""


class DomainError(PmfixError):
    """A point lies outside a space's declared domain (or is not finite)."""


class GenerationExhausted(PmfixError):
    """Rejection sampling hit its attempt cap without producing a valid table."""


class EvalError(PmfixError):
    """Evaluation of a piecewise expression failed (division by zero, unbound name)."""


class ConfigError(PmfixError):
    """Problem in a ``.pmspec`` document, located by line and column."""

    def __init__(self, message, line=0, column=0, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"{line}:{column}: " if line else ""
        extra = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{extra}")


class ParseError(ConfigError):
    """Syntax error."""


class ValidationError(ConfigError):
    """Syntactically valid input that violates a semantic rule."""
