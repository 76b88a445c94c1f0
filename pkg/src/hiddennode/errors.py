"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class BracketError(ValueError):
    """The supplied interval does not bracket a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative method exhausted its iteration budget."""


class ConfigurationError(ValueError):
    """A simulation or run configuration is inconsistent."""
