"""Exception types shared across the package."""


class CliffKdvError(Exception):
    """Base class for all package errors."""


class GridShapeError(CliffKdvError):
    """A sample array does not match the grid it is used with."""


class UnsupportedOrderError(CliffKdvError):
    """Derivative order outside the supported range {1, 2, 3, 4}."""


class NonIntegrableInputError(CliffKdvError):
    """Antiderivative requested for a field with non-zero mean."""

    def __init__(self, mean: float):
        self.mean = float(mean)
        super().__init__(
            f"field has non-zero mean {self.mean:.6e}; no periodic antiderivative exists"
        )


class BlowUpError(CliffKdvError):
    """The solution left the finite range the integrator can represent."""

    def __init__(self, time: float, field: str):
        self.time = float(time)
        self.field = field
        super().__init__(f"blow-up detected at t={self.time:.6g} in field '{field}'")


class UnsupportedShapeError(CliffKdvError):
    """Operation requires a specific number of component fields."""


class DegenerateParametersError(CliffKdvError):
    """Parameter combination degenerates the requested solution family."""


class DomainTooSmallError(CliffKdvError):
    """Profile tails exceed the truncation tolerance at the box edges."""


class InternalConsistencyError(CliffKdvError):
    """Two redundant code paths for the same quantity disagree."""


class InvalidPhasePointError(CliffKdvError):
    """Phase-space point violates the primary constraints."""


class ConfigError(CliffKdvError):
    """Run configuration failed validation."""
