"""Exception types shared across the package.

Precondition violations raise ValueError (possibly this module's subclass) and
map to CLI exit code 2; failed internal cross-checks raise InvariantError and
map to exit code 3.
"""


class PreconditionError(ValueError):
    """An operation was called with arguments outside its contract."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; results cannot be trusted."""
