"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """An iterative kernel did not converge within its sweep budget."""


class ConfigurationError(ValueError):
    """Unsupported combination of construction parameters."""


class TruncationError(ValueError):
    """A requested output degree would discard a non-negligible part of the result."""


class ParseError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
