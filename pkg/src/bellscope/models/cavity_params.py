"""
Cavity and resonance models for the feasibility estimates.

CavityParams stores SI values internally and speaks explicit units at its
boundaries: documents carry {"value", "unit"} objects or "3.186 eV"
strings, validated against the quantity's dimension on parse.
"""

import json
from dataclasses import dataclass
from typing import Optional

from bellscope.constants import from_si, parse_quantity, to_si
from bellscope.errors import ValidationError
from bellscope.utils import round_number

# Field -> (dimension, display unit)
_CAVITY_FIELDS = {
    "photon_energy": ("energy", "eV"),
    "refractive_index": ("dimensionless", ""),
    "tpa_coefficient": ("tpa_coefficient", "cm/W"),
    "mode_volume": ("volume", "um^3"),
    "cavity_lifetime": ("time", "s"),
}


@dataclass(frozen=True)
class CavityParams:
    """
    Microcavity filled with a TPA crystal.

    Attributes:
        photon_energy: hbar*omega in J
        refractive_index: n
        tpa_coefficient: beta in m/W
        mode_volume: V in m^3
        cavity_lifetime: photon lifetime tau_c in s (optional)
    """
    photon_energy: float
    refractive_index: float
    tpa_coefficient: float
    mode_volume: float
    cavity_lifetime: Optional[float] = None

    def __post_init__(self):
        for name in ("photon_energy", "refractive_index", "tpa_coefficient", "mode_volume"):
            value = getattr(self, name)
            if not value > 0:
                raise ValidationError(f"{name} must be strictly positive, got {value}")
        if self.cavity_lifetime is not None and not self.cavity_lifetime > 0:
            raise ValidationError(f"cavity_lifetime must be strictly positive, got {self.cavity_lifetime}")

    @classmethod
    def from_units(
            cls,
            photon_energy: object,
            refractive_index: object,
            tpa_coefficient: object,
            mode_volume: object,
            cavity_lifetime: object = None,
    ) -> "CavityParams":
        """Build from unit-bearing quantities, e.g. photon_energy="3.186 eV"."""
        return cls(
            photon_energy=parse_quantity(photon_energy, "energy"),
            refractive_index=parse_quantity(refractive_index, "dimensionless"),
            tpa_coefficient=parse_quantity(tpa_coefficient, "tpa_coefficient"),
            mode_volume=parse_quantity(mode_volume, "volume"),
            cavity_lifetime=None if cavity_lifetime is None else parse_quantity(cavity_lifetime, "time"),
        )

    @classmethod
    def cucl(cls, cavity_lifetime: Optional[float] = None) -> "CavityParams":
        """CuCl biexciton preset: 3.186 eV, n = 3, beta = 0.1 cm/W, V = 1 um^3."""
        return cls(
            photon_energy=to_si(3.186, "eV", "energy"),
            refractive_index=3.0,
            tpa_coefficient=to_si(0.1, "cm/W", "tpa_coefficient"),
            mode_volume=to_si(1.0, "um^3", "volume"),
            cavity_lifetime=cavity_lifetime,
        )

    def with_lifetime(self, cavity_lifetime: Optional[float]) -> "CavityParams":
        """Copy with another cavity photon lifetime (seconds)."""
        return CavityParams(
            self.photon_energy,
            self.refractive_index,
            self.tpa_coefficient,
            self.mode_volume,
            cavity_lifetime,
        )

    def to_dict(self) -> dict:
        """Convert to dictionary with explicit display units."""
        data = {}
        for name, (dimension, unit) in _CAVITY_FIELDS.items():
            value = getattr(self, name)
            if value is None:
                continue
            if dimension == "dimensionless":
                data[name] = round_number(value)
            else:
                data[name] = {"value": round_number(from_si(value, unit, dimension)), "unit": unit}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "CavityParams":
        """
        Create CavityParams from a unit-bearing document.

        Raises:
            ValidationError: If a field is missing or carries a bad unit
        """
        missing = [n for n in _CAVITY_FIELDS if n != "cavity_lifetime" and n not in data]
        if missing:
            raise ValidationError(f"Cavity parameters are missing: {', '.join(missing)}")
        return cls.from_units(
            photon_energy=data["photon_energy"],
            refractive_index=data["refractive_index"],
            tpa_coefficient=data["tpa_coefficient"],
            mode_volume=data["mode_volume"],
            cavity_lifetime=data.get("cavity_lifetime"),
        )

    def to_json(self) -> str:
        """Serialize to JSON string."""
        data = {"schema": 1}
        data.update(self.to_dict())
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, json_str: str) -> "CavityParams":
        """Deserialize from JSON string."""
        return cls.from_dict(json.loads(json_str))


@dataclass(frozen=True)
class TPARate:
    """Cavity-enhanced TPA rate and the intra-cavity single-photon field."""
    rate: float  # 1/s
    field: float  # V/m


@dataclass(frozen=True)
class QRequirement:
    """Minimum cavity lifetime and quality factor for efficient TPA."""
    tau_min: float  # s
    angular_frequency: float  # rad/s
    q_factor: float


@dataclass(frozen=True)
class ResonanceCheck:
    """
    Two-photon resonance query; all energies in eV.

    `intermediate_energy` optionally names the one-photon transition (for
    CuCl the 3.202 eV exciton) that the photons must stay away from.
    """
    w1: float
    w2: float
    transition_energy: float
    tolerance: float = 1e-3
    intermediate_energy: Optional[float] = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValidationError(f"Resonance tolerance must be positive, got {self.tolerance}")
        if not (self.w1 > 0 and self.w2 > 0):
            raise ValidationError("Photon energies must be positive")


@dataclass(frozen=True)
class ResonanceResult:
    """Outcome of a resonance check."""
    resonant_pair: bool
    degenerate_single_source_resonant: bool
    pair_detuning: float
    one_photon_detuning: Optional[float] = None
    one_photon_resonant: bool = False

    def to_dict(self) -> dict:
        data = {
            "resonant_pair": self.resonant_pair,
            "degenerate_single_source_resonant": self.degenerate_single_source_resonant,
            "pair_detuning_eV": round_number(self.pair_detuning),
        }
        if self.one_photon_detuning is not None:
            data["one_photon_detuning_eV"] = round_number(self.one_photon_detuning)
            data["one_photon_resonant"] = self.one_photon_resonant
        return data
