"""Exception hierarchy for fraclab."""

from typing import Optional


class FracLabError(Exception):
    """Base class for all fraclab errors."""


class DomainError(FracLabError, ValueError):
    """A parameter lies outside its mathematical domain."""


class NotInL1SigmaError(DomainError):
    """The exterior data grows too fast for the nonlocal tail to converge."""

    def __init__(self, message: str = "not in L1_sigma"):
        super().__init__(message)


class UsageError(FracLabError, ValueError):
    """An operation was called in a way its contract does not allow."""


class ConfigError(FracLabError):
    """Invalid experiment configuration, optionally anchored to a line."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.path = path
        self.line = line
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.path and self.line is not None:
            return f"{self.path}:{self.line}: {self.message}"
        if self.path:
            return f"{self.path}: {self.message}"
        return self.message
