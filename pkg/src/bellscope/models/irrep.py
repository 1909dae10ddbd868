"""
Cubic-group irreducible representation labels.

Only the irreps that appear in the two-photon problem are listed: the
vector representation G4- carried by the momentum operator, and the four
even irreps of its symmetric square decomposition
G4- x G4- = G1+ + G3+ + G4+ + G5+.
"""

from enum import Enum
from typing import Optional

from bellscope.errors import ValidationError


class SymmetryClass(Enum):
    """Behaviour of a product-space irrep under exchange of the two photons."""
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"

    @property
    def sign(self) -> int:
        """Sign of the second term in the energy denominator."""
        return 1 if self == SymmetryClass.SYMMETRIC else -1


class IrrepLabel(Enum):
    """Irreducible representations of O_h used by the selection rules."""
    G1_PLUS = "G1+"
    G3_PLUS = "G3+"
    G4_PLUS = "G4+"
    G5_PLUS = "G5+"
    G4_MINUS = "G4-"

    @property
    def dimension(self) -> int:
        return _DIMENSIONS[self]

    @property
    def row_labels(self) -> tuple[str, ...]:
        return _ROW_LABELS[self]

    @property
    def symmetry(self) -> Optional[SymmetryClass]:
        """Exchange symmetry inside G4- x G4- (None for G4- itself)."""
        return _SYMMETRY.get(self)

    @property
    def in_product(self) -> bool:
        """True if the irrep occurs in G4- x G4-."""
        return self in _SYMMETRY

    @classmethod
    def parse(cls, text: str) -> "IrrepLabel":
        """
        Parse "G1+", "Γ1+" or "Gamma1+".

        Raises:
            ValidationError: If the text is not a string or names no supported irrep
        """
        if not isinstance(text, str):
            raise ValidationError(f"Irrep label must be a string, got {text!r}")
        normalized = text.strip().replace("Γ", "G").replace("Gamma", "G").replace("−", "-")
        for label in cls:
            if normalized == label.value or text == label.name:
                return label
        valid = ", ".join(label.value for label in cls)
        raise ValidationError(f"Unknown irrep: {text!r} (expected one of {valid})")


_DIMENSIONS = {
    IrrepLabel.G1_PLUS: 1,
    IrrepLabel.G3_PLUS: 2,
    IrrepLabel.G4_PLUS: 3,
    IrrepLabel.G5_PLUS: 3,
    IrrepLabel.G4_MINUS: 3,
}

_ROW_LABELS = {
    IrrepLabel.G1_PLUS: ("1",),
    IrrepLabel.G3_PLUS: ("u", "v"),
    IrrepLabel.G4_PLUS: ("x", "y", "z"),
    IrrepLabel.G5_PLUS: ("yz", "zx", "xy"),
    IrrepLabel.G4_MINUS: ("x", "y", "z"),
}

_SYMMETRY = {
    IrrepLabel.G1_PLUS: SymmetryClass.SYMMETRIC,
    IrrepLabel.G3_PLUS: SymmetryClass.SYMMETRIC,
    IrrepLabel.G4_PLUS: SymmetryClass.ANTISYMMETRIC,
    IrrepLabel.G5_PLUS: SymmetryClass.SYMMETRIC,
}

PRODUCT_IRREPS = (
    IrrepLabel.G1_PLUS,
    IrrepLabel.G3_PLUS,
    IrrepLabel.G4_PLUS,
    IrrepLabel.G5_PLUS,
)
