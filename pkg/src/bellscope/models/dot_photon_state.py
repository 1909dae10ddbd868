"""
Quantum-dot models.

DotPhotonState is the joint state of the electron-hole pair left in a
quantum dot and the remaining photon, in basis
(up sigma+, up sigma-, down sigma+, down sigma-). PassSchedule is the
ordered list of elements the photon meets between its passes through the
dot.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from bellscope.utils import round_number

from .bell_label import BellLabel
from .confusion_matrix import ConfusionMatrix
from .two_photon_state import BipartiteState

MAX_PASSES = 4


class DotPhotonState(BipartiteState):
    """Electron-hole pair (up/down) and photon (sigma+/sigma-) state."""
    BASIS = ("up_sigma_plus", "up_sigma_minus", "down_sigma_plus", "down_sigma_minus")


class PassElementKind(Enum):
    """Elements of a quantum-dot pass schedule."""
    PI_RETARDER = "pi_retarder"
    HALF_PI_ROTATOR = "half_pi_rotator"
    DOT_PASS = "dot_pass"


@dataclass(frozen=True)
class PassElement:
    """One element; dot passes carry the pass id used as the outcome label."""
    kind: PassElementKind
    pass_id: Optional[int] = None

    def to_dict(self) -> dict:
        data: dict = {"kind": self.kind.value}
        if self.pass_id is not None:
            data["pass"] = self.pass_id
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PassElement":
        return cls(kind=PassElementKind(data["kind"]), pass_id=data.get("pass"))


@dataclass(frozen=True)
class PassSchedule:
    """
    Ordered elements met by the photon.

    Passes are told apart by detection time; `pass_interval` is the round
    trip between consecutive passes in seconds.
    """
    elements: tuple[PassElement, ...]
    pass_interval: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        errors = self.validate()
        if errors:
            raise ValueError("; ".join(errors))

    def validate(self) -> list[str]:
        """
        Check the schedule invariants.

        Returns:
            List of problems (empty if valid)
        """
        errors = []
        ids = self.pass_ids()
        if len(ids) != len(set(ids)):
            errors.append(f"Pass ids must be unique, got {ids}")
        if len(ids) > MAX_PASSES:
            errors.append(f"At most {MAX_PASSES} passes are allowed, got {len(ids)}")
        for element in self.elements:
            if element.kind == PassElementKind.DOT_PASS and element.pass_id is None:
                errors.append("Every dot pass needs a pass id")
        if self.pass_interval < 0:
            errors.append(f"Pass interval must be non-negative, got {self.pass_interval}")
        return errors

    def pass_ids(self) -> list[int]:
        """Pass ids in the order the photon meets them."""
        return [e.pass_id for e in self.elements if e.kind == PassElementKind.DOT_PASS]

    def detection_time(self, pass_id: int) -> float:
        """Delay after the first pass at which a click on `pass_id` is seen."""
        ids = self.pass_ids()
        if pass_id not in ids:
            raise ValueError(f"Unknown pass id: {pass_id}")
        return ids.index(pass_id) * self.pass_interval

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "elements": [e.to_dict() for e in self.elements],
            "pass_interval": self.pass_interval,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PassSchedule":
        """Create PassSchedule from dictionary."""
        return cls(
            elements=tuple(PassElement.from_dict(e) for e in data["elements"]),
            pass_interval=float(data.get("pass_interval", 0.0)),
        )

    def to_json(self) -> str:
        """Serialize to JSON string."""
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class ProtocolResult:
    """
    A multi-pass protocol run.

    `assignment` maps each Bell input to the pass that announces it when
    the dot absorbs with unit efficiency; confusion rows follow pass order.
    """
    schedule: PassSchedule
    confusion: ConfusionMatrix
    assignment: dict[BellLabel, int]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        data = {
            "schedule": self.schedule.to_dict(),
            "assignment": {label.value: pass_id for label, pass_id in self.assignment.items()},
            "detection_times": {
                str(pass_id): round_number(self.schedule.detection_time(pass_id))
                for pass_id in self.schedule.pass_ids()
            },
        }
        data.update(self.confusion.to_dict())
        return data
