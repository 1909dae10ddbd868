"""
Two-qubit state models.

A state is either pure (four complex amplitudes) or mixed (a 4x4 density
matrix). Sub-normalized states are allowed: their norm is the probability
mass that is still in flight, which is how conditional states after a
non-absorption event are carried around.

The two-photon polarization basis is frozen as (xx, xy, yx, yy), photon 1
first. All amplitude vectors and serialized documents use this order.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Optional

import numpy as np

from .bell_label import BellLabel

NORM_TOLERANCE = 1e-9
HERMITIAN_TOLERANCE = 1e-12
EIGENVALUE_TOLERANCE = 1e-12


class PolarizationBasis(Enum):
    """Single-photon linear polarization labels."""
    X = "x"
    Y = "y"


TWO_PHOTON_BASIS = ("xx", "xy", "yx", "yy")


def _encode_complex(value: complex) -> list[float]:
    return [float(np.real(value)), float(np.imag(value))]


def _decode_complex(pair: object) -> complex:
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    if isinstance(pair, (int, float)) and not isinstance(pair, bool):
        return complex(pair)
    raise ValueError(f"Expected [re, im], got {pair!r}")


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """
    Pure or mixed state of two qubits in a fixed four-element basis.

    Exactly one of `amplitudes` and `density` is set. Arrays are copied to
    complex, read-only storage on construction.
    """
    amplitudes: Optional[np.ndarray] = None
    density: Optional[np.ndarray] = None

    BASIS: ClassVar[tuple[str, ...]] = ("00", "01", "10", "11")

    def __post_init__(self):
        if (self.amplitudes is None) == (self.density is None):
            raise ValueError("Exactly one of amplitudes or density must be given")

        if self.amplitudes is not None:
            amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
            if amps.shape != (4,):
                raise ValueError(f"Pure state needs 4 amplitudes, got {amps.size}")
            if not np.all(np.isfinite(amps)):
                raise ValueError("Amplitudes must be finite")
            norm = float(np.vdot(amps, amps).real)
            if norm > 1.0 + NORM_TOLERANCE:
                raise ValueError(f"State norm {norm:.12g} exceeds 1")
            amps.flags.writeable = False
            object.__setattr__(self, "amplitudes", amps)
        else:
            rho = np.array(self.density, dtype=complex)
            if rho.shape != (4, 4):
                raise ValueError(f"Density matrix must be 4x4, got {rho.shape}")
            if not np.all(np.isfinite(rho)):
                raise ValueError("Density matrix must be finite")
            if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOLERANCE:
                raise ValueError("Density matrix is not Hermitian")
            eigenvalues = np.linalg.eigvalsh(rho)
            if eigenvalues.min() < -EIGENVALUE_TOLERANCE:
                raise ValueError(f"Density matrix has negative eigenvalue {eigenvalues.min():.3g}")
            trace = float(np.trace(rho).real)
            if trace > 1.0 + NORM_TOLERANCE:
                raise ValueError(f"Density matrix trace {trace:.12g} exceeds 1")
            rho.flags.writeable = False
            object.__setattr__(self, "density", rho)

    # =========================================================================
    # Constructors
    # =========================================================================

    @classmethod
    def pure(cls, amplitudes) -> "BipartiteState":
        """Create a pure state from four amplitudes in basis order."""
        return cls(amplitudes=np.asarray(amplitudes, dtype=complex))

    @classmethod
    def mixed(cls, density) -> "BipartiteState":
        """Create a mixed state from a 4x4 density matrix."""
        return cls(density=np.asarray(density, dtype=complex))

    @classmethod
    def zero(cls) -> "BipartiteState":
        """The empty state (norm 0), left behind after certain absorption."""
        return cls.pure(np.zeros(4, dtype=complex))

    @classmethod
    def basis_state(cls, label: str) -> "BipartiteState":
        """Create a basis state, e.g. basis_state("xy")."""
        if label not in cls.BASIS:
            raise ValueError(f"Unknown basis label {label!r}; basis is {cls.BASIS}")
        amps = np.zeros(4, dtype=complex)
        amps[cls.BASIS.index(label)] = 1.0
        return cls.pure(amps)

    @classmethod
    def bell(cls, label: BellLabel) -> "BipartiteState":
        """
        Bell state in this basis.

        Phi = (|00> +/- |11>)/sqrt(2) and Psi = (|01> +/- |10>)/sqrt(2)
        with 0/1 the first/second single-qubit basis element.
        """
        amps = np.zeros(4, dtype=complex)
        if label.is_phi:
            amps[0], amps[3] = 1.0, label.sign
        else:
            amps[1], amps[2] = 1.0, label.sign
        return cls.pure(amps / np.sqrt(2.0))

    # =========================================================================
    # Properties
    # =========================================================================

    @property
    def is_pure(self) -> bool:
        """True when the state is stored as amplitudes."""
        return self.amplitudes is not None

    @property
    def norm(self) -> float:
        """Probability mass carried by the state."""
        if self.amplitudes is not None:
            return float(np.vdot(self.amplitudes, self.amplitudes).real)
        return float(np.trace(self.density).real)

    def to_density(self) -> np.ndarray:
        """Density matrix of the state (|psi><psi| for pure states)."""
        if self.amplitudes is not None:
            return np.outer(self.amplitudes, self.amplitudes.conj())
        return np.array(self.density)

    def as_mixed(self) -> "BipartiteState":
        """Same state stored as a density matrix."""
        return type(self).mixed(self.to_density())

    def normalized(self) -> "BipartiteState":
        """
        Rescale to unit norm.

        Raises:
            ValueError: If the state has zero norm
        """
        norm = self.norm
        if norm <= 0.0:
            raise ValueError("Cannot normalize a zero state")
        return self.scaled(1.0 / np.sqrt(norm))

    def scaled(self, factor: complex) -> "BipartiteState":
        """Multiply the amplitudes by factor (density by |factor|^2)."""
        if self.amplitudes is not None:
            return type(self).pure(self.amplitudes * factor)
        return type(self).mixed(self.density * abs(factor) ** 2)

    def transformed(self, unitary: np.ndarray) -> "BipartiteState":
        """Apply a 4x4 matrix: U|psi> for pure states, U rho U^dagger for mixed."""
        if self.amplitudes is not None:
            return type(self).pure(unitary @ self.amplitudes)
        return type(self).mixed(unitary @ self.density @ unitary.conj().T)

    def amplitude(self, label: str) -> complex:
        """
        Amplitude of a basis component.

        Raises:
            ValueError: If the state is mixed or the label unknown
        """
        if self.amplitudes is None:
            raise ValueError("Mixed states have no amplitudes")
        if label not in self.BASIS:
            raise ValueError(f"Unknown basis label {label!r}")
        return complex(self.amplitudes[self.BASIS.index(label)])

    # =========================================================================
    # Serialization
    # =========================================================================

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        if self.amplitudes is not None:
            return {
                "kind": "pure",
                "amplitudes": [_encode_complex(a) for a in self.amplitudes],
            }
        return {
            "kind": "mixed",
            "density": [[_encode_complex(v) for v in row] for row in self.density],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BipartiteState":
        """Create a state from dictionary (e.g., loaded from JSON)."""
        kind = data.get("kind", "pure")
        if kind == "pure":
            return cls.pure([_decode_complex(a) for a in data["amplitudes"]])
        if kind == "mixed":
            return cls.mixed([[_decode_complex(v) for v in row] for row in data["density"]])
        raise ValueError(f"Unknown state kind: {kind!r}")

    def to_json(self) -> str:
        """Serialize to JSON string."""
        data = {"schema": 1}
        data.update(self.to_dict())
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, json_str: str) -> "BipartiteState":
        """Deserialize from JSON string."""
        return cls.from_dict(json.loads(json_str))


class TwoPhotonState(BipartiteState):
    """Polarization state of two photons in basis (xx, xy, yx, yy)."""
    BASIS = TWO_PHOTON_BASIS
