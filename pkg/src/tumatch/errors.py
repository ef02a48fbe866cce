"""Exception hierarchy shared by every module of the package."""


class TumatchError(Exception):
    """Base class for all errors raised by tumatch."""


class BudgetExceeded(TumatchError):
    """An exhaustive enumeration would exceed its configured cap."""


class PreconditionError(TumatchError, ValueError):
    """An operation was called on input that violates its precondition."""


class MalformedInput(TumatchError, ValueError):
    """A market, matching, tree or file is structurally invalid."""


class SearchExhausted(TumatchError):
    """The stable-matching search ran out of budget without a verified result.

    This does not mean no stable matching exists.
    """


class InternalError(TumatchError, AssertionError):
    """A self-check failed; indicates a bug rather than bad input."""
