"""
TransitionModel for two-photon absorption rates.

Holds the energies and reduced matrix element products that enter the
second-order rate. Reduced matrix elements are opaque complex numbers in
arbitrary units; they are supplied, never computed.
"""

import json
from dataclasses import dataclass

from bellscope.errors import ValidationError

from .irrep import IrrepLabel

DEFAULT_LINEWIDTH = 1e-3  # eV


@dataclass(frozen=True)
class IntermediateLevel:
    """Intermediate level phi of symmetry G4- reached by one photon."""
    energy: float
    matrix_element: complex
    name: str = ""

    def to_dict(self) -> dict:
        data = {
            "E": self.energy,
            "M": [float(self.matrix_element.real), float(self.matrix_element.imag)],
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "IntermediateLevel":
        m = data["M"]
        if isinstance(m, (list, tuple)):
            element = complex(float(m[0]), float(m[1]))
        else:
            element = complex(float(m))
        return cls(energy=float(data["E"]), matrix_element=element, name=data.get("name", ""))


@dataclass(frozen=True)
class FinalLevel:
    """Final level of a given irrep reached by absorbing both photons."""
    irrep: IrrepLabel
    energy: float
    name: str = ""

    def to_dict(self) -> dict:
        data = {"irrep": self.irrep.value, "E": self.energy}
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "FinalLevel":
        return cls(
            irrep=IrrepLabel.parse(data["irrep"]),
            energy=float(data["E"]),
            name=data.get("name", ""),
        )


@dataclass(frozen=True)
class TransitionModel:
    """
    Ground state, intermediate levels and final levels of a TPA transition.

    Energies are in eV. The energy-conserving delta function of the rate is
    replaced by a unit-normalized Gaussian of width `sigma`.
    """
    ground_energy: float
    intermediates: tuple[IntermediateLevel, ...]
    finals: tuple[FinalLevel, ...]
    sigma: float = DEFAULT_LINEWIDTH

    def __post_init__(self):
        object.__setattr__(self, "intermediates", tuple(self.intermediates))
        object.__setattr__(self, "finals", tuple(self.finals))
        errors = self.validate()
        if errors:
            raise ValidationError("; ".join(errors))

    def validate(self) -> list[str]:
        """
        Check the model invariants.

        Returns:
            List of problems (empty if valid)
        """
        errors = []
        if not self.sigma > 0:
            errors.append(f"Linewidth sigma must be positive, got {self.sigma}")
        for i, level in enumerate(self.intermediates):
            if not level.energy > self.ground_energy:
                errors.append(
                    f"Intermediate level {level.name or i} at {level.energy} eV "
                    f"is not above the ground energy {self.ground_energy} eV"
                )
        for i, final in enumerate(self.finals):
            if not final.irrep.in_product:
                errors.append(f"Final level {final.name or i} has irrep {final.irrep.value}, not in G4- x G4-")
        return errors

    def level_name(self, index: int) -> str:
        """Display name of an intermediate level."""
        level = self.intermediates[index]
        return level.name or f"#{index} ({level.energy} eV)"

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "E0": self.ground_energy,
            "intermediates": [level.to_dict() for level in self.intermediates],
            "finals": [final.to_dict() for final in self.finals],
            "sigma": self.sigma,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransitionModel":
        """
        Create TransitionModel from dictionary (e.g., loaded from JSON).

        Raises:
            ValidationError: If fields are missing or invalid
        """
        try:
            return cls(
                ground_energy=float(data["E0"]),
                intermediates=tuple(IntermediateLevel.from_dict(d) for d in data["intermediates"]),
                finals=tuple(FinalLevel.from_dict(d) for d in data["finals"]),
                sigma=float(data.get("sigma", DEFAULT_LINEWIDTH)),
            )
        except KeyError as e:
            raise ValidationError(f"Transition model is missing field {e}")
        except (AttributeError, IndexError, TypeError, ValueError) as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f"Invalid transition model: {e}")

    def to_json(self) -> str:
        """Serialize to JSON string."""
        data = {"schema": 1}
        data.update(self.to_dict())
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, json_str: str) -> "TransitionModel":
        """Deserialize from JSON string."""
        return cls.from_dict(json.loads(json_str))


def single_level_model(
        ground_energy: float,
        intermediate_energy: float,
        final_energy: float,
        irrep: IrrepLabel = IrrepLabel.G1_PLUS,
        matrix_element: complex = 1.0,
        sigma: float = DEFAULT_LINEWIDTH,
) -> TransitionModel:
    """One intermediate level and one final level, e.g. exciton -> biexciton."""
    return TransitionModel(
        ground_energy=ground_energy,
        intermediates=(IntermediateLevel(intermediate_energy, complex(matrix_element), "phi"),),
        finals=(FinalLevel(irrep, final_energy, "f"),),
        sigma=sigma,
    )


