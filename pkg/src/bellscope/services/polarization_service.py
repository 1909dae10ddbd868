"""
Polarization service for Bellscope.

Exact algebra of two-photon polarization states: Bell-state construction,
retarders and rotators on one or both photons, general Jones pairs, and
overlaps. Transformation claims hold up to a global phase, so analysis
helpers work with squared overlaps.
"""

from typing import Callable, Union

import numpy as np

from bellscope.models.bell_label import BELL_ORDER, BellLabel
from bellscope.models.jones_operator import JonesOperator
from bellscope.models.two_photon_state import TwoPhotonState
from bellscope.utils import log_operation

StateTransform = Callable[[TwoPhotonState], TwoPhotonState]


class PolarizationService:
    """Bell states and linear polarization elements."""

    def bell_state(self, label: Union[BellLabel, str]) -> TwoPhotonState:
        """
        Normalized Bell state in basis (xx, xy, yx, yy).

        Args:
            label: BellLabel or its name ("PhiPlus", ...)
        """
        if isinstance(label, str):
            label = BellLabel.parse(label)
        return TwoPhotonState.bell(label)

    def apply_jones(
            self,
            state: TwoPhotonState,
            op1: JonesOperator,
            op2: JonesOperator,
    ) -> TwoPhotonState:
        """
        Apply op1 to photon 1 and op2 to photon 2.

        Pure states stay pure; density matrices are conjugated. Operators
        are unitary by construction, so the norm is preserved.
        """
        return state.transformed(np.kron(op1.matrix, op2.matrix))

    def quarter_wave_both(self, state: TwoPhotonState) -> TwoPhotonState:
        """pi/2-retarders diag(1, i) on both photons."""
        qwp = JonesOperator.quarter_wave()
        return self.apply_jones(state, qwp, qwp)

    def rotate_one(self, state: TwoPhotonState, which: int, angle: float) -> TwoPhotonState:
        """
        Rotate the polarization of one photon by `angle` radians.

        Raises:
            ValueError: If which is not 1 or 2
        """
        if which not in (1, 2):
            raise ValueError(f"Photon index must be 1 or 2, got {which!r}")
        rotator = JonesOperator.rotator(angle)
        identity = JonesOperator.identity()
        if which == 1:
            return self.apply_jones(state, rotator, identity)
        return self.apply_jones(state, identity, rotator)

    def overlap(self, a: TwoPhotonState, b: TwoPhotonState) -> Union[complex, float]:
        """
        <a|b> for two pure states; Tr(rho_a rho_b) if either is mixed.
        """
        if a.is_pure and b.is_pure:
            return complex(np.vdot(a.amplitudes, b.amplitudes))
        return float(np.trace(a.to_density() @ b.to_density()).real)

    def squared_overlap(self, a: TwoPhotonState, b: TwoPhotonState) -> float:
        """|<a|b>|^2, or Tr(rho_a rho_b) for mixed input."""
        value = self.overlap(a, b)
        if isinstance(value, complex):
            return abs(value) ** 2
        return value

    def bell_decomposition(self, state: TwoPhotonState) -> dict[BellLabel, float]:
        """Weight of the state on each Bell state (phase-insensitive)."""
        return {label: self.squared_overlap(TwoPhotonState.bell(label), state) for label in BELL_ORDER}

    def bell_basis_map(self, transform: StateTransform) -> np.ndarray:
        """
        Squared overlaps |<B_i|T|B_j>|^2 of a transform on the Bell basis.

        Column j is the image of BELL_ORDER[j]. A transform that permutes
        the Bell states up to phases yields a permutation matrix.
        """
        table = np.zeros((4, 4))
        for j, source in enumerate(BELL_ORDER):
            image = transform(TwoPhotonState.bell(source))
            for i, target in enumerate(BELL_ORDER):
                table[i, j] = self.squared_overlap(TwoPhotonState.bell(target), image)
        log_operation("BELL_MAP", f"permutation={self.induced_permutation(table)}")
        return table

    def induced_permutation(self, table: np.ndarray, tolerance: float = 1e-12) -> dict[BellLabel, BellLabel]:
        """
        Read a Bell-basis map as a permutation.

        Returns:
            {source: image} for every column that is a unit vector
        """
        mapping = {}
        for j, source in enumerate(BELL_ORDER):
            i = int(np.argmax(table[:, j]))
            if abs(table[i, j] - 1.0) <= tolerance:
                mapping[source] = BELL_ORDER[i]
        return mapping
