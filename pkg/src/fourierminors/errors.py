"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so new error types should
subclass one of the three roots below rather than raising bare ValueError.
"""


class FourierMinorsError(Exception):
    """Base class for all package errors."""


class InvalidInputError(FourierMinorsError):
    """A caller-supplied value violates a documented precondition (exit 2)."""


class FieldMismatchError(InvalidInputError):
    """Two elements from different fields were combined."""


class ResourceLimitError(FourierMinorsError):
    """A configured size or conductor bound was exceeded (exit 3)."""


class BudgetExceededError(ResourceLimitError):
    """A scan would exceed its minor-count budget (exit 3).

    Carries the partial report assembled before the scan was refused, so
    callers still get the planned totals and any statistics gathered.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
