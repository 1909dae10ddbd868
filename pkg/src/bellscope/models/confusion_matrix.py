"""
ConfusionMatrix model.

Rows are input Bell states, columns are outcomes (detector or pass ids in
device order, then "no-click"). Each row is a probability distribution.
When detectors announce Bell states, the matrix also reports the success,
error and inconclusive probability of every input.
"""

from dataclasses import dataclass, field

import numpy as np

from bellscope.utils import format_probability, round_probability

from .bell_label import BellLabel
from .device_spec import NO_CLICK

ROW_SUM_TOLERANCE = 1e-9
ENTRY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Per-input outcome probabilities."""
    inputs: tuple[BellLabel, ...]
    outcomes: tuple[str, ...]
    probabilities: np.ndarray
    announcements: dict[str, BellLabel] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outcomes", tuple(str(o) for o in self.outcomes))
        p = np.array(self.probabilities, dtype=float)
        if p.shape != (len(self.inputs), len(self.outcomes)):
            raise ValueError(
                f"Probability table shape {p.shape} does not match "
                f"{len(self.inputs)} inputs x {len(self.outcomes)} outcomes"
            )
        if p.size and (p.min() < -ENTRY_TOLERANCE or p.max() > 1.0 + ENTRY_TOLERANCE):
            raise ValueError("Confusion entries must lie in [0, 1]")
        for label, total in zip(self.inputs, p.sum(axis=1)):
            if abs(total - 1.0) > ROW_SUM_TOLERANCE:
                raise ValueError(f"Row {label.value} sums to {total:.12g}, not 1")
        p = np.clip(p, 0.0, 1.0)
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)

    def probability(self, input_label: BellLabel, outcome: str) -> float:
        """Probability that `input_label` produces `outcome`."""
        return float(self.probabilities[self.inputs.index(input_label), self.outcomes.index(str(outcome))])

    def row(self, input_label: BellLabel) -> dict[str, float]:
        """Outcome distribution of one input."""
        values = self.probabilities[self.inputs.index(input_label)]
        return {o: float(v) for o, v in zip(self.outcomes, values)}

    def detector_block(self) -> np.ndarray:
        """The probabilities without the no-click column."""
        keep = [i for i, o in enumerate(self.outcomes) if o != NO_CLICK]
        return self.probabilities[:, keep]

    def success_probability(self, input_label: BellLabel) -> float:
        """Mass on detectors announcing the input's own Bell state."""
        return sum(
            p for o, p in self.row(input_label).items()
            if self.announcements.get(o) == input_label
        )

    def error_probability(self, input_label: BellLabel) -> float:
        """Mass on detectors announcing a different Bell state."""
        return sum(
            p for o, p in self.row(input_label).items()
            if o in self.announcements and self.announcements[o] != input_label
        )

    def inconclusive_probability(self, input_label: BellLabel) -> float:
        """Mass on no-click and on detectors that announce nothing."""
        return sum(
            p for o, p in self.row(input_label).items()
            if o not in self.announcements
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        data = {
            "outcomes": list(self.outcomes),
            "rows": [
                {
                    "input": label.value,
                    "probabilities": [round_probability(v) for v in self.probabilities[i]],
                }
                for i, label in enumerate(self.inputs)
            ],
        }
        if self.announcements:
            data["announcements"] = {o: label.value for o, label in self.announcements.items()}
            for entry, label in zip(data["rows"], self.inputs):
                entry["success"] = round_probability(self.success_probability(label))
                entry["error"] = round_probability(self.error_probability(label))
                entry["inconclusive"] = round_probability(self.inconclusive_probability(label))
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ConfusionMatrix":
        """Create ConfusionMatrix from dictionary (e.g., loaded from JSON)."""
        return cls(
            inputs=tuple(BellLabel.parse(r["input"]) for r in data["rows"]),
            outcomes=tuple(data["outcomes"]),
            probabilities=np.array([r["probabilities"] for r in data["rows"]], dtype=float),
            announcements={o: BellLabel.parse(v) for o, v in data.get("announcements", {}).items()},
        )

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        """Header (outcome labels) and rows for CSV emission."""
        header = ["input"] + list(self.outcomes)
        rows = [
            [label.value] + [format_probability(v) for v in self.probabilities[i]]
            for i, label in enumerate(self.inputs)
        ]
        return header, rows
