"""Exception and warning types shared across the toolkit."""


class RSToolkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RSToolkitError):
    """Argument outside the mathematical domain of an operation."""


class NonConvergence(RSToolkitError):
    """A series or product failed to meet tolerance within the term budget."""


class SingularPoint(RSToolkitError):
    """Evaluation requested at a singular point (e.g. z = 0 for q-derivatives)."""


class QuadratureFailure(RSToolkitError):
    """Numerical integration did not reach the requested accuracy."""


class ConfigError(RSToolkitError):
    """Invalid CLI or run configuration."""


class DegenerateLabel(RSToolkitError):
    """State label degenerate for the requested quantity (e.g. vacuum)."""


class TruncationWarning(UserWarning):
    """Basis truncation leaves more tail mass than requested."""
