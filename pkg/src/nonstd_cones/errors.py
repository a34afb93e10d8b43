"""Exception hierarchy.

Everything derived from :class:`DomainError` is a user-facing failure (bad
input, violated precondition) and maps to CLI exit status 1.
:class:`InvariantError` signals a bug and maps to exit status 2.
"""


class DomainError(Exception):
    pass


class ParseError(DomainError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DialectError(DomainError):
    pass


class ArityError(DomainError):
    pass


class FieldMismatchError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class InvariantError(Exception):
    pass
