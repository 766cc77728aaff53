"""Exception types shared across the package.

Range violations raise the builtin IndexError and validation/domain
violations raise the builtin ValueError; only the cases that need to be
told apart programmatically get their own classes.
"""


class BudgetError(RuntimeError):
    """An exhaustive computation would exceed its configured work budget."""


class FormatError(ValueError):
    """A serialized container is malformed (bad magic, version, or size)."""


class CoverageError(ValueError):
    """A query point is not covered by any segment of the approximation."""
