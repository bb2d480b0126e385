"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NumericalError(ArithmeticError):
    """A numerical routine (quadrature, root bracketing) failed to converge."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} ({details})"


class ConsistencyError(NumericalError):
    """A computed probability escaped [0, 1] by more than rounding noise."""


class NoSolutionError(NumericalError):
    """The covertness equation has no root inside the searchable power range."""


class ConfigError(ValueError):
    """A configuration file or field failed validation."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
