"""
BellLabel model.

Names the four maximally entangled two-qubit states. The same labels are
used for two-photon polarization states and for the quantum-dot
electron-hole/photon states.
"""

from enum import Enum

from bellscope.errors import ValidationError


class BellLabel(Enum):
    """The four Bell states."""
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"

    @property
    def sign(self) -> int:
        """Relative sign between the two superposed components."""
        return 1 if self in (BellLabel.PHI_PLUS, BellLabel.PSI_PLUS) else -1

    @property
    def is_phi(self) -> bool:
        """True for the parallel-component states."""
        return self in (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS)

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        """
        Parse a label by value ("PhiPlus") or member name ("PHI_PLUS").

        Raises:
            ValidationError: If the text is not a string or names no Bell state
        """
        if not isinstance(text, str):
            raise ValidationError(f"Bell state label must be a string, got {text!r}")
        for label in cls:
            if text in (label.value, label.name) or text.lower() == label.value.lower():
                return label
        valid = ", ".join(label.value for label in cls)
        raise ValidationError(f"Unknown Bell state: {text!r} (expected one of {valid})")


BELL_ORDER = (
    BellLabel.PHI_PLUS,
    BellLabel.PHI_MINUS,
    BellLabel.PSI_PLUS,
    BellLabel.PSI_MINUS,
)
