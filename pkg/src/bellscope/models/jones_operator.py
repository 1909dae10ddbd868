"""
JonesOperator model.

A lossless linear polarization element acting on one photon, written in the
(x, y) basis. Retarders use the fast axis along x, so a retarder of phase
delta is diag(1, e^{i delta}).
"""

from dataclasses import dataclass

import numpy as np

UNITARY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class JonesOperator:
    """2x2 unitary Jones matrix for a single photon."""
    matrix: np.ndarray
    name: str = "jones"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"Jones matrix must be 2x2, got {m.shape}")
        deviation = np.max(np.abs(m.conj().T @ m - np.eye(2)))
        if deviation > UNITARY_TOLERANCE:
            raise ValueError(f"Jones matrix {self.name!r} is not unitary (deviation {deviation:.3g})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "JonesOperator":
        return cls(np.eye(2), name="identity")

    @classmethod
    def retarder(cls, phase: float) -> "JonesOperator":
        """Retarder adding `phase` to y relative to x."""
        return cls(np.diag([1.0, np.exp(1j * phase)]), name=f"retarder({phase:.6g})")

    @classmethod
    def quarter_wave(cls) -> "JonesOperator":
        """pi/2-retarder, exactly diag(1, i)."""
        return cls(np.diag([1.0, 1j]), name="quarter_wave")

    @classmethod
    def rotator(cls, angle: float) -> "JonesOperator":
        """Rotation of linear polarization by `angle` radians."""
        c, s = np.cos(angle), np.sin(angle)
        return cls(np.array([[c, -s], [s, c]]), name=f"rotator({angle:.6g})")

    def then(self, other: "JonesOperator") -> "JonesOperator":
        """Element `other` placed after this one."""
        return JonesOperator(other.matrix @ self.matrix, name=f"{self.name}->{other.name}")

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in self.matrix],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JonesOperator":
        """Create JonesOperator from dictionary."""
        matrix = [[complex(v[0], v[1]) for v in row] for row in data["matrix"]]
        return cls(np.array(matrix), name=data.get("name", "jones"))
