"""
Exception types for Bellscope.

All errors derive from ValueError so callers that only care about
bad input can keep catching ValueError.
"""


class ValidationError(ValueError):
    """Malformed input, document, or configuration."""


class UnitError(ValidationError):
    """Unknown unit string, or a unit of the wrong dimension."""


class PhysicsDomainError(ValueError):
    """A request that is well-formed but physically invalid."""


class ResonanceError(PhysicsDomainError):
    """A photon energy sits exactly on an intermediate level."""

    def __init__(self, level: str, detuning: float):
        self.level = level
        self.detuning = detuning
        super().__init__(
            f"Energy denominator is singular at intermediate level {level} "
            f"(detuning {detuning:.3g} eV)"
        )
