"""Shared exception types."""


class InvalidArgument(ValueError):
    """An argument fails a structural validity condition."""


class PreconditionViolation(ValueError):
    """An operation was called outside its stated domain."""


class CollapseStuck(RuntimeError):
    """The collapse scheduler could not find a legal elementary collapse."""

    def __init__(self, message, alive=()):
        super().__init__(message)
        self.alive = tuple(alive)
