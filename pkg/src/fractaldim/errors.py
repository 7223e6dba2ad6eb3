"""Exception types shared across the package."""


class RuleError(ValueError):
    """A rule file or rule definition violates the format or its invariants."""


class BudgetError(RuntimeError):
    """An operation would exceed its configured resource budget.

    Deliberately not a validation failure: the input may be fine, the
    requested computation is just too large for the configured limits.
    """
