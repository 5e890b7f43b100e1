"""Exception types raised by the solvers.

The CLI reports these by class name, so the names are part of the interface.
"""


class FSQError(Exception):
    """Base class for every domain error raised by the package."""


class DomainError(FSQError, ValueError):
    pass


class NoSignChange(FSQError, ValueError):
    pass


class MaxIterations(FSQError, RuntimeError):
    pass


class NonFinite(FSQError, ArithmeticError):
    pass


class NonConverged(FSQError, RuntimeError):
    pass


class InvalidMode(DomainError):
    pass


class NotPropagating(DomainError):
    pass


class InvalidProfile(DomainError):
    pass


class IoError(FSQError, OSError):
    pass
