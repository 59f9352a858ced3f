"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """An invalid lattice/model/experiment specification."""


class DomainError(ValueError):
    """An input outside the mathematical domain of an operation."""


class BudgetError(RuntimeError):
    """A run would exceed the configured node-evaluation budget."""
