"""Exception hierarchy shared by every module."""


class OneRegError(Exception):
    """Base class for all package errors."""


class DomainError(OneRegError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(OneRegError, ValueError):
    """A structural object (connection set, subgroup, ...) fails validation."""

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = list(offenders)


class CapacityError(OneRegError, RuntimeError):
    """Input exceeds a configured size bound."""


class IntegrityError(OneRegError, RuntimeError):
    """Two independent computations disagree; always an engine bug."""


class Graph6ParseError(OneRegError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset
