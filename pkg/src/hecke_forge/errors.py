"""Exception types shared by every module; the CLI maps them to exit codes."""


class HeckeForgeError(Exception):
    """Base class."""


class ValidationError(HeckeForgeError, ValueError):
    """A precondition of an operation was violated (CLI exit code 2).

    ``field`` names the offending input so callers can point at it.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class GuardError(HeckeForgeError):
    """A size or precision guard was exceeded (CLI exit code 3)."""


class PreconditionReport(HeckeForgeError):
    """A mathematical precondition failed; carries a witness for the report."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
