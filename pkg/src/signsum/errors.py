"""Exception hierarchy shared by the library and the CLI."""


class SignsumError(Exception):
    """Base class for all library errors."""


class DomainError(SignsumError, ValueError):
    """An operation was applied outside its mathematical domain."""


class ContractError(SignsumError, ValueError):
    """A documented precondition was violated by the caller."""


class PrecisionExhausted(SignsumError):
    """The requested enclosure width was not reached at the maximum precision."""


class CapacityError(SignsumError):
    """The weight vector is too long for the requested computation."""


class UsageError(SignsumError):
    """Malformed user input (CLI flags, weight files)."""


class WeightFileError(UsageError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
