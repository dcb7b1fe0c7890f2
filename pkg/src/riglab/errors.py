"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A model or solver parameter is outside its valid domain."""


class BudgetExceeded(RuntimeError):
    """An exact decision procedure ran past its configured budget.

    Raised instead of returning a guess: callers either enlarge the
    budget or treat the instance as undecidable at this size.
    """


class EdgeListFormatError(ValueError):
    """An edge-list file violates the ``n m`` / ``u v`` text format."""


class ConfigError(ValueError):
    """An experiment config document failed schema validation."""
