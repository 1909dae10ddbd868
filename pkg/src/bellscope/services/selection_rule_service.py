"""
Selection-rule service for Bellscope.

Two-photon absorption in a cubic crystal: photons propagating along z
carry x/y polarization, each couples through the G4- momentum operator,
and the pair reaches a final level of irrep mu in G4- x G4-. The rate of
a polarization state factors into Clebsch-Gordan geometry and energy
denominators:

    rate(psi) = sum_f | sum_m G_{mu m}(psi) sum_phi L_phi M_phi |^2 g(E_f - E0 - w1 - w2)

with G the geometrical factor, L the symmetric or antisymmetric energy
denominator and g a unit-normalized Gaussian lineshape.
"""

from typing import Optional

import numpy as np
from scipy import linalg
from scipy.stats import norm

from bellscope.errors import PhysicsDomainError, ResonanceError, ValidationError
from bellscope.models.bell_label import BellLabel
from bellscope.models.cg_table import CGTable, ROW_INDEX, RowKey, pair_index
from bellscope.models.irrep import PRODUCT_IRREPS, IrrepLabel, SymmetryClass
from bellscope.models.transition_model import TransitionModel
from bellscope.models.two_photon_state import TWO_PHOTON_BASIS, TwoPhotonState
from bellscope.utils import log_error, log_operation

RESONANCE_TOLERANCE = 1e-12  # eV

_R2 = 1.0 / np.sqrt(2.0)
_R3 = 1.0 / np.sqrt(3.0)
_R6 = 1.0 / np.sqrt(6.0)

# Columns: xx xy xz yx yy yz zx zy zz
_CG_LITERAL = np.array([
    [_R3, 0, 0, 0, _R3, 0, 0, 0, _R3],            # G1+
    [-_R6, 0, 0, 0, -_R6, 0, 0, 0, 2 * _R6],      # G3+ u
    [_R2, 0, 0, 0, -_R2, 0, 0, 0, 0],             # G3+ v
    [0, 0, 0, 0, 0, _R2, 0, -_R2, 0],             # G4+ x
    [0, 0, -_R2, 0, 0, 0, _R2, 0, 0],             # G4+ y
    [0, _R2, 0, -_R2, 0, 0, 0, 0, 0],             # G4+ z
    [0, 0, 0, 0, 0, _R2, 0, _R2, 0],              # G5+ yz
    [0, 0, _R2, 0, 0, 0, _R2, 0, 0],              # G5+ zx
    [0, _R2, 0, _R2, 0, 0, 0, 0, 0],              # G5+ xy
])

# Columns of the 9-dim pair space reached by (xx, xy, yx, yy)
_XY_COLUMNS = tuple(pair_index(label[0], label[1]) for label in TWO_PHOTON_BASIS)


def build_cg_table() -> CGTable:
    """
    The frozen Clebsch-Gordan table for G4- x G4-.

    Raises:
        RuntimeError: If the literal table fails its own checks
    """
    table = CGTable(_CG_LITERAL)
    problems = table.validate()
    if problems:
        for problem in problems:
            log_error(problem)
        raise RuntimeError("Clebsch-Gordan table is inconsistent")
    log_operation("CG_TABLE", f"rows={len(ROW_INDEX)} deviation={table.unitarity_deviation():.3g}")
    return table


def lineshape(detuning: float, sigma: float) -> float:
    """Unit-normalized Gaussian of width sigma (eV) at `detuning` (eV)."""
    if not sigma > 0:
        raise ValidationError(f"Linewidth sigma must be positive, got {sigma}")
    return float(norm.pdf(detuning, loc=0.0, scale=sigma))


class SelectionRuleService:
    """
    Geometrical factors, energy denominators and TPA rates.

    Every method takes an optional CGTable; the frozen table is used when
    none is given.
    """

    def __init__(self, cg: Optional[CGTable] = None):
        self._cg = cg

    @property
    def cg(self) -> CGTable:
        """The table used when callers pass none."""
        if self._cg is None:
            self._cg = build_cg_table()
        return self._cg

    def build_cg_table(self) -> CGTable:
        return build_cg_table()

    # =========================================================================
    # Geometry
    # =========================================================================

    def geometrical_factor(
            self,
            mu: IrrepLabel,
            m: RowKey,
            psi: TwoPhotonState,
            cg: Optional[CGTable] = None,
    ) -> complex:
        """
        G_{mu m}(psi) = sum_{l,l'} amp(l l') (mu m | G4- l, G4- l').

        z-polarized amplitudes are zero, so only the xx, xy, yx, yy columns
        contribute.

        Raises:
            ValueError: If psi is mixed or (mu, m) is not a row of the table
        """
        if not psi.is_pure:
            raise ValueError("Geometrical factor needs a pure state; use tpa_relative_rate for mixed states")
        row = (cg or self.cg).row(mu, m)
        return complex(np.dot(row[list(_XY_COLUMNS)], psi.amplitudes))

    def bell_geometrical_factor(
            self,
            mu: IrrepLabel,
            m: RowKey,
            label: BellLabel,
            cg: Optional[CGTable] = None,
    ) -> complex:
        """
        G_{mu m} of a Bell state written with unit weight per component.

        This is sqrt(2) times the factor of the normalized Bell state; for
        PhiPlus and G1+ it is 2/sqrt(3).
        """
        return np.sqrt(2.0) * self.geometrical_factor(mu, m, TwoPhotonState.bell(label), cg)

    def geometrical_factors(
            self,
            psi: TwoPhotonState,
            cg: Optional[CGTable] = None,
    ) -> dict[tuple[IrrepLabel, str], complex]:
        """Factors for every row of every irrep in G4- x G4-."""
        table = cg or self.cg
        return {
            (mu, label): self.geometrical_factor(mu, label, psi, table)
            for mu, label in ROW_INDEX
        }

    # =========================================================================
    # Energetics
    # =========================================================================

    def energy_denominator(
            self,
            e_phi: float,
            e0: float,
            w1: float,
            w2: float,
            symmetry: SymmetryClass,
            level: str = "phi",
    ) -> float:
        """
        1/(E_phi - E0 - w1) +/- 1/(E_phi - E0 - w2), + for symmetric irreps.

        Raises:
            ResonanceError: If a photon energy hits the intermediate level
        """
        d1 = e_phi - e0 - w1
        d2 = e_phi - e0 - w2
        for detuning in (d1, d2):
            if abs(detuning) <= RESONANCE_TOLERANCE:
                raise ResonanceError(level, detuning)
        return 1.0 / d1 + symmetry.sign / d2

    def lineshape(self, detuning: float, sigma: float) -> float:
        return lineshape(detuning, sigma)

    def _final_amplitudes(
            self,
            model: TransitionModel,
            w1: float,
            w2: float,
    ) -> list[tuple[IrrepLabel, complex, float]]:
        """(irrep, sum_phi L_phi M_phi, lineshape weight) for each final level."""
        if not (w1 > 0 and w2 > 0):
            raise ValidationError(f"Photon energies must be positive, got {w1} and {w2}")

        finals = []
        for final in model.finals:
            if not final.irrep.in_product:
                raise PhysicsDomainError(f"Final irrep {final.irrep.value} is not reachable by two photons")
            coupling = 0j
            for i, level in enumerate(model.intermediates):
                denominator = self.energy_denominator(
                    level.energy,
                    model.ground_energy,
                    w1,
                    w2,
                    final.irrep.symmetry,
                    level=model.level_name(i),
                )
                coupling += denominator * level.matrix_element
            weight = lineshape(final.energy - model.ground_energy - w1 - w2, model.sigma)
            finals.append((final.irrep, coupling, weight))
        return finals

    def tpa_relative_rate(
            self,
            psi: TwoPhotonState,
            model: TransitionModel,
            w1: float,
            w2: float,
            cg: Optional[CGTable] = None,
    ) -> float:
        """
        Relative TPA rate of a polarization state (arbitrary units).

        Pure states are contracted with the geometrical factors directly;
        mixed states use Tr(A rho) with the absorption operator.

        Raises:
            ResonanceError: If an energy denominator is singular
            ValidationError: If a photon energy is not positive
        """
        table = cg or self.cg
        if not psi.is_pure:
            return float(np.trace(self.absorption_operator(model, w1, w2, table) @ psi.density).real)

        rate = 0.0
        for irrep, coupling, weight in self._final_amplitudes(model, w1, w2):
            amplitude = sum(
                self.geometrical_factor(irrep, m, psi, table) for m in range(irrep.dimension)
            ) * coupling
            rate += abs(amplitude) ** 2 * weight
        log_operation("TPA_RATE", f"finals={len(model.finals)} rate={rate:.6g}")
        return float(rate)

    def absorption_operator(
            self,
            model: TransitionModel,
            w1: float,
            w2: float,
            cg: Optional[CGTable] = None,
    ) -> np.ndarray:
        """
        Positive Hermitian 4x4 operator A with rate(psi) = <psi|A|psi>.
        """
        table = cg or self.cg
        operator = np.zeros((4, 4), dtype=complex)
        for irrep, coupling, weight in self._final_amplitudes(model, w1, w2):
            vector = table.rows(irrep).sum(axis=0)[list(_XY_COLUMNS)] * coupling
            operator += weight * np.outer(vector.conj(), vector)
        return operator

    def absorbed_state(
            self,
            model: TransitionModel,
            w1: float,
            w2: float,
            cg: Optional[CGTable] = None,
    ) -> TwoPhotonState:
        """
        The polarization state absorbed most strongly by the model.

        The dominant eigenvector of the absorption operator, with its
        largest component made real and positive.

        Raises:
            PhysicsDomainError: If the model absorbs no polarization state
        """
        eigenvalues, eigenvectors = linalg.eigh(self.absorption_operator(model, w1, w2, cg))
        if eigenvalues[-1] <= 0.0:
            raise PhysicsDomainError("Transition model absorbs no polarization state at these photon energies")
        vector = eigenvectors[:, -1]
        pivot = vector[int(np.argmax(np.abs(vector)))]
        vector = vector * (abs(pivot) / pivot)
        log_operation("ABSORBED_STATE", f"eigenvalue={eigenvalues[-1]:.6g}")
        return TwoPhotonState.pure(vector / np.linalg.norm(vector))

    def dominant_irreps(self, psi: TwoPhotonState, cg: Optional[CGTable] = None) -> list[IrrepLabel]:
        """Irreps with a non-zero geometrical factor for psi."""
        factors = self.geometrical_factors(psi, cg)
        return [
            mu for mu in PRODUCT_IRREPS
            if any(abs(factors[(mu, label)]) > 1e-12 for label in mu.row_labels)
        ]
