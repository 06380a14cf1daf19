"""Exception types shared across the package."""


class PrivselError(Exception):
    """Base class for every package-specific error."""


class ValidationError(PrivselError, ValueError):
    """An input violates a documented contract (domain, shape, or range)."""


class DimensionError(ValidationError):
    """Operands are defined over different domain sizes."""


class ConstraintViolationError(PrivselError):
    """A derived parameter set fails one of the named soundness constraints."""

    def __init__(self, name: str, detail: str):
        self.constraint = name
        super().__init__(f"constraint '{name}' violated: {detail}")


class AuditGuardError(PrivselError):
    """An exhaustive audit was requested beyond its enumeration guard."""
