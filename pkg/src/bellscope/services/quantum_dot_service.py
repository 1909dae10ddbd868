"""
Quantum-dot service for Bellscope.

A dot holding an electron-hole pair absorbs a photon only when the joint
pair/photon state is Psi+ (Pauli blocking rules out the rest). Sending the
photon through the dot several times, with a pi-retarder or a half-pi
rotator between passes, discriminates all four Bell states by the pass at
which the absorption happens.
"""

from typing import Optional, Union

import numpy as np

from bellscope.models.bell_label import BELL_ORDER, BellLabel
from bellscope.models.confusion_matrix import ConfusionMatrix
from bellscope.models.device_spec import NO_CLICK
from bellscope.models.dot_photon_state import (
    DotPhotonState,
    PassElement,
    PassElementKind,
    PassSchedule,
    ProtocolResult,
)
from bellscope.utils import log_operation

from .device_service import absorb, kraus_channel

ASSIGNMENT_TOLERANCE = 1e-9

# Photon operators in the (sigma+, sigma-) basis, identity on the pair
_PI_RETARDER = np.kron(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))
_HALF_PI_ROTATOR = np.kron(np.eye(2), np.diag([1.0, -1.0]))


def default_schedule(pass_interval: float = 0.0) -> PassSchedule:
    """dot 1, half-pi rotator, dot 2, pi-retarder, dot 3, half-pi rotator, dot 4."""
    return PassSchedule(
        elements=(
            PassElement(PassElementKind.DOT_PASS, 1),
            PassElement(PassElementKind.HALF_PI_ROTATOR),
            PassElement(PassElementKind.DOT_PASS, 2),
            PassElement(PassElementKind.PI_RETARDER),
            PassElement(PassElementKind.DOT_PASS, 3),
            PassElement(PassElementKind.HALF_PI_ROTATOR),
            PassElement(PassElementKind.DOT_PASS, 4),
        ),
        pass_interval=pass_interval,
    )


class QuantumDotService:
    """Dot-photon Bell states, the dot absorption channel and multi-pass protocols."""

    def qd_bell_state(self, label: Union[BellLabel, str]) -> DotPhotonState:
        """Bell state of the electron-hole pair and the photon."""
        if isinstance(label, str):
            label = BellLabel.parse(label)
        return DotPhotonState.bell(label)

    def qd_pi_retarder(self, state: DotPhotonState) -> DotPhotonState:
        """Swap sigma+ and sigma- on the photon."""
        return state.transformed(_PI_RETARDER)

    def qd_half_pi_rotator(self, state: DotPhotonState) -> DotPhotonState:
        """Relative sign -1 between sigma+ and sigma-."""
        return state.transformed(_HALF_PI_ROTATOR)

    def dot_pass(self, state: DotPhotonState, eta: float) -> tuple[float, DotPhotonState]:
        """
        One pass through the dot: absorbs Psi+ with efficiency eta.

        Returns:
            (p_click, conditional no-click state), as for a crystal
        """
        return kraus_channel(state, DotPhotonState.bell(BellLabel.PSI_PLUS), eta)

    def pass_probabilities(
            self,
            state: DotPhotonState,
            eta: float,
            schedule: Optional[PassSchedule] = None,
    ) -> dict[str, float]:
        """
        Probability of absorption at each pass, then no-click.

        Raises:
            ValueError: If the state has zero norm
        """
        schedule = schedule or default_schedule()
        if state.norm <= 0.0:
            raise ValueError("Cannot propagate a zero state")
        state = state.normalized()

        absorbed = DotPhotonState.bell(BellLabel.PSI_PLUS)
        result: dict[str, float] = {}
        for element in schedule.elements:
            if element.kind == PassElementKind.DOT_PASS:
                p_click, state = absorb(state, absorbed, eta)
                result[str(element.pass_id)] = p_click
            elif element.kind == PassElementKind.PI_RETARDER:
                state = self.qd_pi_retarder(state)
            else:
                state = self.qd_half_pi_rotator(state)
        result[NO_CLICK] = max(0.0, 1.0 - sum(result.values()))
        return result

    def assign_passes(self, schedule: Optional[PassSchedule] = None) -> dict[BellLabel, int]:
        """
        Pass at which each Bell input is absorbed with unit efficiency.

        Inputs no pass absorbs with certainty are left out.
        """
        schedule = schedule or default_schedule()
        assignment = {}
        for label in BELL_ORDER:
            probabilities = self.pass_probabilities(DotPhotonState.bell(label), 1.0, schedule)
            for pass_id in schedule.pass_ids():
                if abs(probabilities[str(pass_id)] - 1.0) <= ASSIGNMENT_TOLERANCE:
                    assignment[label] = pass_id
                    break
        return assignment

    def four_pass_protocol(
            self,
            eta: float,
            schedule: Optional[PassSchedule] = None,
    ) -> ProtocolResult:
        """
        Run the multi-pass protocol for every Bell input.

        Confusion rows are ordered by assigned pass, so at eta = 1 the
        matrix over pass ids is the identity.

        Raises:
            ValueError: If eta is outside [0, 1]
        """
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {eta}")
        schedule = schedule or default_schedule()
        assignment = self.assign_passes(schedule)

        order = sorted(assignment, key=lambda label: schedule.pass_ids().index(assignment[label]))
        order += [label for label in BELL_ORDER if label not in assignment]

        outcomes = [str(p) for p in schedule.pass_ids()] + [NO_CLICK]
        rows = []
        for label in order:
            probabilities = self.pass_probabilities(DotPhotonState.bell(label), eta, schedule)
            rows.append([probabilities[o] for o in outcomes])

        confusion = ConfusionMatrix(
            inputs=tuple(order),
            outcomes=tuple(outcomes),
            probabilities=np.array(rows),
            announcements={str(pass_id): label for label, pass_id in assignment.items()},
        )
        log_operation("QD_PROTOCOL", f"eta={eta} passes={schedule.pass_ids()} assigned={len(assignment)}")
        return ProtocolResult(schedule=schedule, confusion=confusion, assignment=assignment)
