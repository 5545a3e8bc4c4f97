"""Exception hierarchy shared by every module of the package."""


class NetError(Exception):
    """Base class for all errors raised by colorednets."""


class DomainError(NetError, ValueError):
    """An element or operand does not belong to the expected domain."""


class NotSubMultiset(NetError, ValueError):
    """Subtraction ``a - b`` was attempted where ``b`` is not below ``a``."""


class CountOverflow(NetError, OverflowError):
    """A multiplicity left the range of checked unsigned counts."""


class NotEnabled(NetError):
    """A step was fired at a marking that does not enable it."""


class UnknownBinding(DomainError):
    """A (transition, mode) pair is not declared by the net."""


class NotComposable(NetError):
    """Two step sequences do not meet at a common marking."""


class IllFormedSequence(NetError):
    """Some layer of a step sequence is not enabled where it fires."""


class NotFunctionLike(NetError):
    """A colored morphism has a color or mode image that is not a single generator."""


class ResourceLimit(NetError):
    """An enumeration exceeded its node budget."""


class ValidationFailed(NetError):
    """A net or document violates a structural invariant.

    ``problems`` holds the individual report entries.
    """

    def __init__(self, message, problems=()):
        super().__init__(message)
        self.problems = list(problems)


class DocumentSyntaxError(NetError):
    """A net document could not be parsed."""

    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class ReservedSeparator(DocumentSyntaxError):
    """A user identifier contains the separator reserved for unfolded names."""
