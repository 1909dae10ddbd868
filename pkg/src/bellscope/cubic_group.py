"""
The proper rotations of the cube and projection operators onto the
irreducible subspaces of G4- x G4-.

The 24 rotations are the signed 3x3 permutation matrices with determinant
+1. Inversion acts as +1 on a product of two odd vectors, so O and O_h give
the same projectors on the nine-dimensional product space.
"""

from enum import Enum
from functools import lru_cache
from itertools import permutations, product

import numpy as np
from scipy import linalg

from bellscope.models.irrep import IrrepLabel

GROUP_ORDER = 24


class RotationClass(Enum):
    """Conjugacy classes of O."""
    IDENTITY = "E"
    C3 = "8C3"
    C2 = "3C2"
    C4 = "6C4"
    C2_PRIME = "6C2'"


def _permutation_parity(perm: tuple[int, ...]) -> int:
    """+1 for even permutations, -1 for odd."""
    parity = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            parity = -parity
    return parity


@lru_cache(maxsize=1)
def rotations() -> tuple[np.ndarray, ...]:
    """The 24 proper rotations as read-only 3x3 matrices."""
    result = []
    for perm in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            matrix = np.zeros((3, 3))
            for row, col in enumerate(perm):
                matrix[row, col] = signs[row]
            if round(np.linalg.det(matrix)) == 1:
                matrix.flags.writeable = False
                result.append(matrix)
    return tuple(result)


def _a2_character(rotation: np.ndarray) -> int:
    perm = tuple(int(np.flatnonzero(row)[0]) for row in rotation)
    return _permutation_parity(perm)


def rotation_class(rotation: np.ndarray) -> RotationClass:
    """Conjugacy class of a proper rotation."""
    trace = round(float(np.trace(rotation)))
    if trace == 3:
        return RotationClass.IDENTITY
    if trace == 0:
        return RotationClass.C3
    if trace == 1:
        return RotationClass.C4
    return RotationClass.C2 if _a2_character(rotation) == 1 else RotationClass.C2_PRIME


def character(irrep: IrrepLabel, rotation: np.ndarray) -> int:
    """
    Character of a rotation in one of the irreps of G4- x G4-.

    The vector representation has character tr(R); the others follow
    from it and the sign representation.
    """
    trace = round(float(np.trace(rotation)))
    sign = _a2_character(rotation)
    if irrep == IrrepLabel.G1_PLUS:
        return 1
    if irrep in (IrrepLabel.G4_PLUS, IrrepLabel.G4_MINUS):
        return trace
    if irrep == IrrepLabel.G5_PLUS:
        return trace * sign
    if irrep == IrrepLabel.G3_PLUS:
        return trace * trace - 1 - trace - trace * sign
    raise ValueError(f"No character for {irrep.value}")


def character_table() -> dict[IrrepLabel, dict[RotationClass, int]]:
    """Character of every irrep on every class."""
    table: dict[IrrepLabel, dict[RotationClass, int]] = {}
    for irrep in IrrepLabel:
        table[irrep] = {}
        for rotation in rotations():
            table[irrep][rotation_class(rotation)] = character(irrep, rotation)
    return table


def product_representation(rotation: np.ndarray) -> np.ndarray:
    """R x R on the nine (l, l') pairs, ordered xx, xy, ..., zz."""
    return np.kron(rotation, rotation)


def projector(irrep: IrrepLabel) -> np.ndarray:
    """
    Projection operator onto the `irrep` subspace of G4- x G4-.

    Raises:
        ValueError: If the irrep does not occur in the product
    """
    if not irrep.in_product:
        raise ValueError(f"{irrep.value} does not occur in G4- x G4-")
    total = np.zeros((9, 9))
    for rotation in rotations():
        total += character(irrep, rotation) * product_representation(rotation)
    return irrep.dimension / GROUP_ORDER * total


def projected_basis(irrep: IrrepLabel) -> np.ndarray:
    """Orthonormal basis of the irrep subspace, one row per vector."""
    return linalg.orth(projector(irrep)).T


def row_space_distance(rows: np.ndarray, irrep: IrrepLabel) -> float:
    """
    Distance between the span of `rows` and the irrep subspace.

    Returns the sine of the largest principal angle between the two
    subspaces; zero when they coincide.
    """
    rows = np.atleast_2d(rows)
    if rows.shape[0] != irrep.dimension:
        return 1.0
    angles = linalg.subspace_angles(rows.T, projected_basis(irrep).T)
    return float(np.max(np.sin(angles)))
