"""Exception hierarchy shared by the library and the command line front end."""


class ScatterError(Exception):
    """Base class for all errors raised by qubit_scatter."""


class DomainError(ScatterError, ValueError):
    """Argument outside the domain where a function is defined or finite."""


class PreconditionError(ScatterError, ValueError):
    """A regime assumption (causality, smallness ratio, large time) is violated."""


class ConvergenceError(ScatterError, ArithmeticError):
    """A numerical procedure did not reach its declared accuracy."""


class ParseError(ScatterError, ValueError):
    """Malformed configuration text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ScatterError, ValueError):
    """A parameter violates a model invariant."""
