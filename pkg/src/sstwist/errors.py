"""Exception types shared across the package.

DomainError and its subclasses signal bad inputs or violated preconditions
(the CLI maps them to exit code 2).  InternalCheckError means an internal
self-verification failed and indicates a bug, never bad user input.
"""


class DomainError(Exception):
    """Input outside an operation's documented domain."""


class SizeError(DomainError):
    """Input exceeds the desk-scale bounds this package commits to."""


class NotEmbeddableError(DomainError):
    """No element of the requested multiplicative order exists in the unit group."""


class NotInTableError(DomainError):
    """A supersingular (q, t) pair matching none of the classifier's rows."""


class UnsupportedPrimeError(DomainError):
    """No built-in maximal-order construction; caller must supply a basis."""


class InternalCheckError(Exception):
    """A construction failed its own verification; this is a bug, not bad input."""
