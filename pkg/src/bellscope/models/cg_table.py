"""
CGTable model.

Clebsch-Gordan coefficients (mu m | G4- l, G4- l') for the decomposition of
the product of two vector representations of the cubic group. Rows are
indexed by (mu, m) in the order G1+, G3+ (u, v), G4+ (x, y, z),
G5+ (yz, zx, xy); columns by (l, l') in the order xx, xy, xz, yx, yy, yz,
zx, zy, zz.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .irrep import PRODUCT_IRREPS, IrrepLabel, SymmetryClass

COMPONENTS = ("x", "y", "z")
PAIR_LABELS = tuple(a + b for a in COMPONENTS for b in COMPONENTS)
ROW_INDEX = tuple((mu, m) for mu in PRODUCT_IRREPS for m in mu.row_labels)

UNITARY_TOLERANCE = 1e-12

RowKey = Union[int, str]


def pair_index(l1: str, l2: str) -> int:
    """Column index of the component pair (l, l')."""
    return COMPONENTS.index(l1) * 3 + COMPONENTS.index(l2)


def swap_permutation() -> np.ndarray:
    """9x9 permutation exchanging the two photon indices l <-> l'."""
    swap = np.zeros((9, 9))
    for l1 in COMPONENTS:
        for l2 in COMPONENTS:
            swap[pair_index(l2, l1), pair_index(l1, l2)] = 1.0
    return swap


@dataclass(frozen=True, eq=False)
class CGTable:
    """Immutable 9x9 coefficient matrix for G4- x G4-."""
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        if c.shape != (9, 9):
            raise ValueError(f"CG table must be 9x9, got {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    def row_index(self, mu: IrrepLabel, m: RowKey) -> int:
        """
        Position of row (mu, m); m is a row number or a row label.

        Raises:
            ValueError: If mu is not in the product or m is out of range
        """
        if not mu.in_product:
            raise ValueError(f"{mu.value} does not occur in G4- x G4-")
        labels = mu.row_labels
        if isinstance(m, str):
            if m not in labels:
                raise ValueError(f"{mu.value} has rows {labels}, not {m!r}")
            m = labels.index(m)
        if not 0 <= m < len(labels):
            raise ValueError(f"{mu.value} has {len(labels)} rows, not row {m}")
        return ROW_INDEX.index((mu, labels[m]))

    def row(self, mu: IrrepLabel, m: RowKey) -> np.ndarray:
        """Coefficients of one row over the nine (l, l') pairs."""
        return self.coefficients[self.row_index(mu, m)]

    def rows(self, mu: IrrepLabel) -> np.ndarray:
        """All rows of an irrep, shape (dimension, 9)."""
        return np.array([self.row(mu, m) for m in range(mu.dimension)])

    def coefficient(self, mu: IrrepLabel, m: RowKey, l1: str, l2: str) -> float:
        """Single coefficient (mu m | G4- l, G4- l')."""
        return float(self.row(mu, m)[pair_index(l1, l2)])

    def symmetry_class(self, mu: IrrepLabel) -> SymmetryClass:
        """Exchange symmetry of an irrep's rows."""
        if mu.symmetry is None:
            raise ValueError(f"{mu.value} does not occur in G4- x G4-")
        return mu.symmetry

    def unitarity_deviation(self) -> float:
        """Largest entry of |C C^T - I|."""
        c = self.coefficients
        return float(np.max(np.abs(c @ c.T - np.eye(9))))

    def validate(self) -> list[str]:
        """
        Check the table invariants.

        Returns:
            List of problems (empty if the table is sound)
        """
        errors = []

        deviation = self.unitarity_deviation()
        if deviation > UNITARY_TOLERANCE:
            errors.append(f"Coefficient matrix is not unitary (deviation {deviation:.3g})")

        swap = swap_permutation()
        for mu in PRODUCT_IRREPS:
            sign = mu.symmetry.sign
            for m, label in enumerate(mu.row_labels):
                row = self.row(mu, m)
                if np.max(np.abs(swap @ row - sign * row)) > UNITARY_TOLERANCE:
                    errors.append(f"Row {mu.value}/{label} is not {mu.symmetry.value} under l <-> l'")

        expected = np.zeros(9)
        for l1 in COMPONENTS:
            expected[pair_index(l1, l1)] = 1.0 / np.sqrt(3.0)
        if np.max(np.abs(self.row(IrrepLabel.G1_PLUS, 0) - expected)) > UNITARY_TOLERANCE:
            errors.append("G1+ row is not (1/sqrt 3) delta_{l,l'}")

        return errors

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "columns": list(PAIR_LABELS),
            "rows": [
                {"irrep": mu.value, "row": label, "coefficients": [float(v) for v in self.coefficients[i]]}
                for i, (mu, label) in enumerate(ROW_INDEX)
            ],
        }
