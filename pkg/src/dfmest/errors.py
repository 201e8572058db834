"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point or interval lies outside the domain an operation requires."""


class ParameterError(ValueError):
    """A constructor parameter is outside its admissible range."""


class ConstructionError(ValueError):
    """Inputs cannot be assembled into a valid object (e.g. non-convex data)."""


class CapacityError(ValueError):
    """An exact enumeration was requested beyond its guarded size limits."""


class ConfigurationError(ValueError):
    """An experiment or estimator configuration is unusable as given."""


class CertificationError(ValueError):
    """A claimed numerical certificate failed its re-verification."""


class IndeterminateFormError(ArithmeticError):
    """Extended-real arithmetic hit an indeterminate form such as inf - inf."""
