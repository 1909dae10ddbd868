"""
Cavity service for Bellscope.

Feasibility numbers for a TPA crystal inside a microcavity: the
single-photon-pair TPA rate, the cavity lifetime and Q it demands, the
resulting absorption efficiency, and the two-photon resonance condition
for photons of different colour.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import yaml

from bellscope.constants import HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY, from_si
from bellscope.errors import ValidationError
from bellscope.models.cavity_params import (
    CavityParams,
    QRequirement,
    ResonanceCheck,
    ResonanceResult,
    TPARate,
)
from bellscope.models.run_config import CAVITY_PRESETS
from bellscope.utils import log_operation


class CavityService:
    """Cavity-enhanced TPA estimates."""

    def preset(self, name: str, cavity_lifetime: Optional[float] = None) -> CavityParams:
        """
        Named parameter set.

        Raises:
            ValidationError: If the preset is unknown
        """
        if name == "cucl":
            return CavityParams.cucl(cavity_lifetime)
        raise ValidationError(f"Unknown preset {name!r} (expected {', '.join(CAVITY_PRESETS)})")

    def load_params(self, path: Union[str, Path]) -> CavityParams:
        """
        Load unit-bearing cavity parameters from JSON or YAML.

        Raises:
            ValidationError: If the file is missing, malformed or uses bad units
        """
        path = Path(path)
        if not path.exists():
            raise ValidationError(f"Parameter file not found: {path}")
        try:
            data = yaml.safe_load(path.read_text())
        except yaml.YAMLError as e:
            raise ValidationError(f"Cannot parse parameter file {path}: {e}")
        if not isinstance(data, dict):
            raise ValidationError(f"Parameter file {path} must hold an object")
        if data.get("schema", 1) != 1:
            raise ValidationError(f"Unsupported parameter schema: {data.get('schema')}")
        return CavityParams.from_dict(data)

    def tpa_rate(self, params: CavityParams) -> TPARate:
        """
        alpha = c^2 beta hbar omega / (n^4 V) and E = (hbar omega / n^2 eps0 V)^(1/2).

        Returns:
            TPARate with alpha in 1/s and the field in V/m
        """
        n = params.refractive_index
        rate = SPEED_OF_LIGHT ** 2 * params.tpa_coefficient * params.photon_energy / (n ** 4 * params.mode_volume)
        field = np.sqrt(params.photon_energy / (n ** 2 * VACUUM_PERMITTIVITY * params.mode_volume))
        log_operation("TPA_RATE", f"alpha={rate:.6g} 1/s E={field:.6g} V/m")
        return TPARate(rate=float(rate), field=float(field))

    def q_factor(self, angular_frequency: float, lifetime: float) -> float:
        """Q = omega * tau."""
        return angular_frequency * lifetime

    def required_q(self, params: CavityParams) -> QRequirement:
        """Minimum cavity lifetime 1/alpha and the Q that carries it."""
        tau_min = 1.0 / self.tpa_rate(params).rate
        omega = params.photon_energy / HBAR
        return QRequirement(
            tau_min=tau_min,
            angular_frequency=omega,
            q_factor=self.q_factor(omega, tau_min),
        )

    def absorption_efficiency(self, params: CavityParams) -> float:
        """
        eta = alpha / (alpha + 1/tau_c), TPA against cavity decay.

        Raises:
            ValidationError: If the cavity lifetime is not set
        """
        if params.cavity_lifetime is None:
            raise ValidationError("Absorption efficiency needs the cavity lifetime tau_c")
        alpha = self.tpa_rate(params).rate
        return alpha / (alpha + 1.0 / params.cavity_lifetime)

    def estimate(self, params: CavityParams) -> dict:
        """All feasibility numbers in one record, SI plus display units."""
        rate = self.tpa_rate(params)
        requirement = self.required_q(params)
        result = {
            "alpha_per_s": rate.rate,
            "field_V_per_m": rate.field,
            "tau_min_s": requirement.tau_min,
            "tau_min_ps": from_si(requirement.tau_min, "ps", "time"),
            "angular_frequency_rad_per_s": requirement.angular_frequency,
            "q_min": requirement.q_factor,
        }
        if params.cavity_lifetime is not None:
            result["eta"] = self.absorption_efficiency(params)
            result["q_cavity"] = self.q_factor(requirement.angular_frequency, params.cavity_lifetime)
        return result

    def check_resonance(self, check: ResonanceCheck) -> ResonanceResult:
        """
        Two-photon resonance of a photon pair and of a single source.

        resonant_pair holds when w1 + w2 matches the transition within the
        tolerance; degenerate_single_source_resonant when two photons of
        either colour alone would match it.
        """
        tol = check.tolerance
        delta_e = check.transition_energy
        pair_detuning = check.w1 + check.w2 - delta_e
        single = abs(2 * check.w1 - delta_e) <= tol or abs(2 * check.w2 - delta_e) <= tol

        one_photon_detuning = None
        one_photon_resonant = False
        if check.intermediate_energy is not None:
            one_photon_detuning = min(
                abs(check.w1 - check.intermediate_energy),
                abs(check.w2 - check.intermediate_energy),
            )
            one_photon_resonant = one_photon_detuning <= tol

        return ResonanceResult(
            resonant_pair=abs(pair_detuning) <= tol,
            degenerate_single_source_resonant=single,
            pair_detuning=pair_detuning,
            one_photon_detuning=one_photon_detuning,
            one_photon_resonant=one_photon_resonant,
        )

    def nondegenerate_pair(self, delta_e: float, split: float) -> tuple[float, float]:
        """
        Photon energies (delta_e - split)/2 and (delta_e + split)/2.

        Raises:
            ValidationError: Unless 0 <= split < delta_e
        """
        if not 0.0 <= split < delta_e:
            raise ValidationError(f"Split must satisfy 0 <= split < {delta_e}, got {split}")
        return (delta_e - split) / 2.0, (delta_e + split) / 2.0
