"""Exception types shared across the package.

Every error carries a short machine-readable ``kind``. The CLI maps kinds to
exit codes (parse -> 2, convergence/numerical -> 3, guard -> 4) and the HTTP
service maps them to status codes, so library code raises these instead of
bare ValueErrors whenever the failure is a user-facing condition.
"""


class GroundselError(Exception):
    """Base class for package errors."""

    kind = "error"


class ParseError(GroundselError):
    """Malformed input data: bad token, empty graph, unknown label."""

    kind = "parse"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GuardError(GroundselError):
    """A size or argument guard refused the operation."""

    kind = "guard"


class ConvergenceError(GroundselError):
    """An iterative routine hit its iteration cap before reaching tolerance."""

    kind = "convergence"

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (last residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class NumericalError(GroundselError):
    """Non-finite values encountered during a computation."""

    kind = "numerical"
