"""
Unit tests for Bellscope services.

These tests exercise each service in isolation with small, hand-checked
inputs. Acceptance-level properties live in test_acceptance.py.
"""

import numpy as np
import pytest
from scipy import integrate

from bellscope import cubic_group
from bellscope.errors import PhysicsDomainError, ResonanceError, ValidationError
from bellscope.models import (
    BELL_ORDER,
    BellLabel,
    CavityParams,
    DeviceSpec,
    DotPhotonState,
    IrrepLabel,
    JonesOperator,
    ResonanceCheck,
    StageSpec,
    SymmetryClass,
    TwoPhotonState,
    single_level_model,
)
from bellscope.services import (
    CavityService,
    DeviceService,
    PolarizationService,
    QuantumDotService,
    SelectionRuleService,
)
from bellscope.services.device_service import BLOCK_SIZE, kraus_operator

R2 = 1 / np.sqrt(2)


class TestPolarizationService:
    """Tests for PolarizationService."""

    @pytest.fixture
    def service(self) -> PolarizationService:
        return PolarizationService()

    def test_bell_state_by_name(self, service):
        """Test Bell states can be requested by name."""
        np.testing.assert_allclose(service.bell_state("PsiMinus").amplitudes, [0, R2, -R2, 0])

    def test_bell_gram_matrix(self, service, bell_states):
        """Test the Bell states form an orthonormal basis."""
        gram = np.array([
            [service.overlap(bell_states[a], bell_states[b]) for b in BELL_ORDER]
            for a in BELL_ORDER
        ])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)

    def test_overlap_with_basis_state(self, service, bell_states):
        """Test <Phi+|xx> = 1/sqrt 2."""
        xx = TwoPhotonState.basis_state("xx")
        assert service.overlap(bell_states[BellLabel.PHI_PLUS], xx) == pytest.approx(R2)

    def test_overlap_mixed(self, service, bell_states):
        """Test mixed overlaps use Tr(rho_a rho_b)."""
        rho = TwoPhotonState.mixed(np.diag([0.5, 0, 0, 0.5]))
        assert service.overlap(bell_states[BellLabel.PHI_PLUS], rho) == pytest.approx(0.5)

    def test_quarter_wave_keeps_xx(self, service):
        """Test the x component is untouched by the retarder."""
        xx = TwoPhotonState.basis_state("xx")
        np.testing.assert_array_equal(service.quarter_wave_both(xx).amplitudes, xx.amplitudes)

    def test_quarter_wave_psi_plus_phase(self, service, bell_states):
        """Test Psi+ picks up the global phase i."""
        out = service.quarter_wave_both(bell_states[BellLabel.PSI_PLUS])
        np.testing.assert_allclose(out.amplitudes, 1j * bell_states[BellLabel.PSI_PLUS].amplitudes, atol=1e-15)

    def test_quarter_wave_fourth_power(self, service, bell_states):
        """Test four passes through the retarder pair are the identity."""
        state = TwoPhotonState.pure([0.5, 0.5j, -0.5, 0.5])
        out = state
        for _ in range(4):
            out = service.quarter_wave_both(out)
        assert service.squared_overlap(state, out) == pytest.approx(1.0, abs=1e-12)

    def test_apply_jones_matches_quarter_wave(self, service, bell_states):
        """Test the general element reproduces the retarder pair exactly."""
        qwp = JonesOperator(np.diag([1, 1j]))
        state = bell_states[BellLabel.PHI_MINUS]
        np.testing.assert_array_equal(
            service.apply_jones(state, qwp, qwp).amplitudes,
            service.quarter_wave_both(state).amplitudes,
        )

    def test_apply_jones_identity(self, service):
        """Test identity operators leave any state unchanged."""
        state = TwoPhotonState.pure([0.1, 0.7j, -0.1, 0.7]).normalized()
        identity = JonesOperator.identity()
        np.testing.assert_allclose(service.apply_jones(state, identity, identity).amplitudes, state.amplitudes)

    def test_apply_jones_preserves_overlaps(self, service):
        """Test a unitary pair keeps |<psi|phi>| and norms."""
        op1 = JonesOperator.rotator(0.37).then(JonesOperator.retarder(1.1))
        op2 = JonesOperator.retarder(-0.4).then(JonesOperator.rotator(2.3))
        psi = TwoPhotonState.pure([0.3, 0.4j, 0.5, -0.1]).normalized()
        phi = TwoPhotonState.pure([0.2j, 0.1, -0.6, 0.3]).normalized()
        out_psi = service.apply_jones(psi, op1, op2)
        out_phi = service.apply_jones(phi, op1, op2)
        assert out_psi.norm == pytest.approx(1.0, abs=1e-12)
        assert abs(service.overlap(out_psi, out_phi)) == pytest.approx(abs(service.overlap(psi, phi)), abs=1e-12)

        direct = np.kron(op1.matrix, op2.matrix) @ psi.amplitudes
        np.testing.assert_allclose(out_psi.amplitudes, direct, atol=1e-12)

    def test_density_path_agrees(self, service):
        """Test pure and density-matrix propagation give the same result."""
        psi = TwoPhotonState.pure([0.3, 0.4j, 0.5, -0.1]).normalized()
        pure, mixed = psi, psi.as_mixed()
        for step in (
            service.quarter_wave_both,
            lambda s: service.rotate_one(s, 1, np.pi / 2),
            lambda s: service.rotate_one(s, 2, 0.3),
        ):
            pure, mixed = step(pure), step(mixed)
        np.testing.assert_allclose(mixed.density, pure.to_density(), atol=1e-12)

    def test_rotate_zero_angle(self, service, bell_states):
        """Test a zero rotation is the identity."""
        state = bell_states[BellLabel.PSI_MINUS]
        np.testing.assert_allclose(service.rotate_one(state, 2, 0.0).amplitudes, state.amplitudes)

    def test_rotate_bad_photon(self, service, bell_states):
        """Test photon indices other than 1 and 2 are rejected."""
        with pytest.raises(ValueError):
            service.rotate_one(bell_states[BellLabel.PHI_PLUS], 0, np.pi / 2)

    def test_rotator_permutation(self, service):
        """Test the pi/2 rotator swaps Psi+/Phi- and Psi-/Phi+."""
        table = service.bell_basis_map(lambda s: service.rotate_one(s, 1, np.pi / 2))
        assert service.induced_permutation(table) == {
            BellLabel.PHI_PLUS: BellLabel.PSI_MINUS,
            BellLabel.PHI_MINUS: BellLabel.PSI_PLUS,
            BellLabel.PSI_PLUS: BellLabel.PHI_MINUS,
            BellLabel.PSI_MINUS: BellLabel.PHI_PLUS,
        }

    def test_bell_decomposition(self, service):
        """Test weights of |xx> on the Bell basis."""
        weights = service.bell_decomposition(TwoPhotonState.basis_state("xx"))
        assert weights[BellLabel.PHI_PLUS] == pytest.approx(0.5)
        assert weights[BellLabel.PHI_MINUS] == pytest.approx(0.5)
        assert weights[BellLabel.PSI_PLUS] == pytest.approx(0.0)


class TestCubicGroup:
    """Tests for the cubic rotation group helpers."""

    def test_group_order(self):
        """Test there are 24 distinct proper rotations."""
        rotations = cubic_group.rotations()
        assert len(rotations) == cubic_group.GROUP_ORDER
        assert len({r.tobytes() for r in rotations}) == 24
        for r in rotations:
            assert np.linalg.det(r) == pytest.approx(1.0)

    def test_class_sizes(self):
        """Test the conjugacy classes have sizes 1, 8, 3, 6, 6."""
        sizes: dict = {}
        for r in cubic_group.rotations():
            cls = cubic_group.rotation_class(r)
            sizes[cls] = sizes.get(cls, 0) + 1
        assert sizes == {
            cubic_group.RotationClass.IDENTITY: 1,
            cubic_group.RotationClass.C3: 8,
            cubic_group.RotationClass.C2: 3,
            cubic_group.RotationClass.C4: 6,
            cubic_group.RotationClass.C2_PRIME: 6,
        }

    def test_character_orthogonality(self):
        """Test the product irreps have orthonormal characters."""
        rotations = cubic_group.rotations()
        irreps = [mu for mu in IrrepLabel if mu.in_product]
        for a in irreps:
            for b in irreps:
                inner = sum(cubic_group.character(a, r) * cubic_group.character(b, r) for r in rotations) / 24
                assert inner == (1 if a == b else 0)

    def test_character_table(self):
        """Test the G3+ and G5+ rows of the O character table."""
        table = cubic_group.character_table()
        classes = cubic_group.RotationClass
        assert table[IrrepLabel.G3_PLUS] == {
            classes.IDENTITY: 2, classes.C3: -1, classes.C2: 2, classes.C4: 0, classes.C2_PRIME: 0,
        }
        assert table[IrrepLabel.G5_PLUS] == {
            classes.IDENTITY: 3, classes.C3: 0, classes.C2: -1, classes.C4: -1, classes.C2_PRIME: 1,
        }

    def test_projectors_resolve_identity(self):
        """Test the four projectors sum to the identity on the product space."""
        total = sum(cubic_group.projector(mu) for mu in IrrepLabel if mu.in_product)
        np.testing.assert_allclose(total, np.eye(9), atol=1e-12)

    def test_projector_rank(self):
        """Test each projector has rank equal to the irrep dimension."""
        for mu in (IrrepLabel.G1_PLUS, IrrepLabel.G3_PLUS, IrrepLabel.G4_PLUS, IrrepLabel.G5_PLUS):
            assert cubic_group.projected_basis(mu).shape == (mu.dimension, 9)

    def test_projector_outside_product(self):
        """Test G4- has no projector on the product space."""
        with pytest.raises(ValueError):
            cubic_group.projector(IrrepLabel.G4_MINUS)

    def test_row_space_distance_wrong_rows(self, cg):
        """Test rows from another irrep are far from the subspace."""
        assert cubic_group.row_space_distance(cg.rows(IrrepLabel.G4_PLUS), IrrepLabel.G5_PLUS) > 0.5


class TestSelectionRuleService:
    """Tests for SelectionRuleService."""

    @pytest.fixture
    def service(self) -> SelectionRuleService:
        return SelectionRuleService()

    @pytest.fixture
    def g1_model(self):
        """Exciton at 3.202 eV, G1+ biexciton at 6.372 eV."""
        return single_level_model(0.0, 3.202, 6.372, IrrepLabel.G1_PLUS, sigma=0.001)

    def test_g1_factor_normalized_state(self, service, bell_states):
        """Test G(G1+, Phi+) for the normalized Bell state is sqrt(2/3)."""
        g = service.geometrical_factor(IrrepLabel.G1_PLUS, 0, bell_states[BellLabel.PHI_PLUS])
        assert g == pytest.approx(np.sqrt(2 / 3), abs=1e-12)

    def test_g1_factor_single_component(self, service):
        """Test G(G1+, |xx>) = 1/sqrt 3."""
        g = service.geometrical_factor(IrrepLabel.G1_PLUS, 0, TwoPhotonState.basis_state("xx"))
        assert g == pytest.approx(1 / np.sqrt(3), abs=1e-12)

    def test_factor_rejects_mixed(self, service, bell_states):
        """Test mixed input is rejected."""
        with pytest.raises(ValueError, match="pure"):
            service.geometrical_factor(IrrepLabel.G1_PLUS, 0, bell_states[BellLabel.PHI_PLUS].as_mixed())

    def test_factor_linear(self, service):
        """Test the factor is linear in the amplitudes."""
        a = TwoPhotonState.pure([0.2, 0.3j, -0.4, 0.1])
        b = TwoPhotonState.pure([0.1j, -0.2, 0.3, 0.5])
        combo = TwoPhotonState.pure(0.6 * a.amplitudes + 0.3j * b.amplitudes)
        for mu, m in [(IrrepLabel.G3_PLUS, "u"), (IrrepLabel.G4_PLUS, "z"), (IrrepLabel.G5_PLUS, "xy")]:
            expected = 0.6 * service.geometrical_factor(mu, m, a) + 0.3j * service.geometrical_factor(mu, m, b)
            assert service.geometrical_factor(mu, m, combo) == pytest.approx(expected, abs=1e-12)

    def test_factor_weights_sum_to_norm(self, service):
        """Test sum over all rows of |G|^2 equals the state norm."""
        psi = TwoPhotonState.pure([0.2, 0.3j, -0.4, 0.1])
        total = sum(abs(g) ** 2 for g in service.geometrical_factors(psi).values())
        assert total == pytest.approx(psi.norm, abs=1e-12)

    def test_g5_xy_psi_plus(self, service, bell_states):
        """Test G(G5+ xy, Psi+) = 1 from the projected G5+ subspace."""
        basis = cubic_group.projected_basis(IrrepLabel.G5_PLUS)
        xy_yx = np.zeros(9)
        xy_yx[[1, 3]] = R2
        projected = basis.T @ (basis @ xy_yx)
        # xy + yx lies in the G5+ subspace
        assert np.linalg.norm(projected - xy_yx) == pytest.approx(0.0, abs=1e-12)
        g = service.geometrical_factor(IrrepLabel.G5_PLUS, "xy", bell_states[BellLabel.PSI_PLUS])
        assert g == pytest.approx(1.0, abs=1e-12)

    def test_dominant_irreps(self, service, bell_states):
        """Test which irreps each Bell state couples to."""
        assert service.dominant_irreps(bell_states[BellLabel.PHI_PLUS]) == [IrrepLabel.G1_PLUS, IrrepLabel.G3_PLUS]
        assert service.dominant_irreps(bell_states[BellLabel.PHI_MINUS]) == [IrrepLabel.G3_PLUS]
        assert service.dominant_irreps(bell_states[BellLabel.PSI_PLUS]) == [IrrepLabel.G5_PLUS]
        assert service.dominant_irreps(bell_states[BellLabel.PSI_MINUS]) == [IrrepLabel.G4_PLUS]

    def test_energy_denominator_degenerate(self, service):
        """Test the CuCl exciton with degenerate photons."""
        value = service.energy_denominator(3.202, 0.0, 1.593, 1.593, SymmetryClass.SYMMETRIC)
        assert value == pytest.approx(2 / (3.202 - 1.593), rel=1e-12)
        assert value == pytest.approx(1.2430, abs=1e-4)

    def test_energy_denominator_antisymmetric_degenerate(self, service):
        """Test the antisymmetric denominator vanishes for equal photons."""
        assert service.energy_denominator(3.202, 0.0, 1.593, 1.593, SymmetryClass.ANTISYMMETRIC) == 0.0

    def test_energy_denominator_cancellation(self, service):
        """Test the symmetric denominator cancels for mirrored detunings."""
        assert service.energy_denominator(2.5, 0.0, 2.0, 3.0, SymmetryClass.SYMMETRIC) == 0.0

    def test_energy_denominator_resonance(self, service):
        """Test a photon on the intermediate level is a resonance error."""
        with pytest.raises(ResonanceError) as exc_info:
            service.energy_denominator(3.202, 0.0, 3.202, 1.0, SymmetryClass.SYMMETRIC, level="exciton")
        assert exc_info.value.level == "exciton"
        assert isinstance(exc_info.value, PhysicsDomainError)

    def test_lineshape(self, service):
        """Test the Gaussian is unit-normalized."""
        sigma = 0.002
        grid = np.linspace(-10 * sigma, 10 * sigma, 4001)
        values = [service.lineshape(x, sigma) for x in grid]
        assert integrate.trapezoid(values, grid) == pytest.approx(1.0, rel=1e-6)
        with pytest.raises(ValidationError):
            service.lineshape(0.0, 0.0)

    def test_rate_g1_only_phi_plus(self, service, bell_states, g1_model):
        """Test a G1+ final level absorbs Phi+ and nothing else."""
        rates = {
            label: service.tpa_relative_rate(state, g1_model, w1=3.186, w2=3.186)
            for label, state in bell_states.items()
        }
        assert rates[BellLabel.PHI_PLUS] > 0
        for label in (BellLabel.PHI_MINUS, BellLabel.PSI_PLUS, BellLabel.PSI_MINUS):
            assert rates[label] == pytest.approx(0.0, abs=1e-12 * rates[BellLabel.PHI_PLUS])

    def test_rate_zero_state(self, service, g1_model):
        """Test the empty state has zero rate."""
        assert service.tpa_relative_rate(TwoPhotonState.zero(), g1_model, w1=3.186, w2=3.186) == 0.0

    def test_rate_mixed_matches_pure(self, service, g1_model):
        """Test Tr(A rho) agrees with the pure-state contraction."""
        psi = TwoPhotonState.pure([0.6, 0.2j, -0.3, 0.5]).normalized()
        pure = service.tpa_relative_rate(psi, g1_model, w1=3.15, w2=3.222)
        mixed = service.tpa_relative_rate(psi.as_mixed(), g1_model, w1=3.15, w2=3.222)
        assert mixed == pytest.approx(pure, rel=1e-12)

    def test_rate_needs_positive_energies(self, service, bell_states, g1_model):
        """Test photon energies must be positive."""
        with pytest.raises(ValidationError):
            service.tpa_relative_rate(bell_states[BellLabel.PHI_PLUS], g1_model, w1=0.0, w2=3.186)

    def test_rate_requires_energies(self, service, bell_states, g1_model):
        """Test the photon energies have no defaults."""
        with pytest.raises(TypeError):
            service.tpa_relative_rate(bell_states[BellLabel.PHI_PLUS], g1_model)
        with pytest.raises(TypeError):
            service.absorbed_state(g1_model)

    def test_rate_explicit_table(self, service, cg, bell_states, g1_model):
        """Test a CG table can follow the photon energies."""
        psi = bell_states[BellLabel.PSI_PLUS]
        assert service.tpa_relative_rate(psi, g1_model, 3.186, 3.186, cg) == pytest.approx(
            service.tpa_relative_rate(psi, g1_model, w1=3.186, w2=3.186)
        )

    def test_rate_resonance_propagates(self, service, bell_states, g1_model):
        """Test a singular denominator surfaces from the rate."""
        with pytest.raises(ResonanceError):
            service.tpa_relative_rate(bell_states[BellLabel.PHI_PLUS], g1_model, w1=3.202, w2=3.17)

    def test_absorbed_state_g1(self, service, g1_model):
        """Test the G1+ model absorbs Phi+."""
        absorbed = service.absorbed_state(g1_model, w1=3.186, w2=3.186)
        phi_plus = TwoPhotonState.bell(BellLabel.PHI_PLUS)
        assert abs(np.vdot(phi_plus.amplitudes, absorbed.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_absorbed_state_g4(self, service):
        """Test an antisymmetric final level absorbs Psi- for distinct photons."""
        model = single_level_model(0.0, 3.202, 3.186, IrrepLabel.G4_PLUS, sigma=0.01)
        absorbed = service.absorbed_state(model, w1=1.4, w2=1.786)
        psi_minus = TwoPhotonState.bell(BellLabel.PSI_MINUS)
        assert abs(np.vdot(psi_minus.amplitudes, absorbed.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_absorbed_state_none(self, service):
        """Test degenerate photons cannot drive an antisymmetric final level."""
        model = single_level_model(0.0, 3.202, 3.186, IrrepLabel.G4_PLUS, sigma=0.01)
        with pytest.raises(PhysicsDomainError):
            service.absorbed_state(model, w1=1.593, w2=1.593)

    def test_absorption_operator_hermitian(self, service, g1_model):
        """Test the absorption operator is positive and Hermitian."""
        operator = service.absorption_operator(g1_model, w1=3.15, w2=3.222)
        np.testing.assert_allclose(operator, operator.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(operator).min() > -1e-9


class TestDeviceService:
    """Tests for DeviceService."""

    @pytest.fixture
    def service(self, scope) -> DeviceService:
        return scope.devices

    def test_standard_layout(self, service):
        """Test the standard device has four crystals and no terminal."""
        device = service.standard_device(0.9)
        assert device.outcome_labels() == ["1", "2", "3", "4", "no-click"]
        assert device.terminal is None
        assert len(device.stages) == 7

    def test_shortcut_layout(self, service):
        """Test the shortcut device ends in a Psi+ photodetector."""
        device = service.shortcut_device(0.9)
        assert device.outcome_labels() == ["1", "2", "3", "4", "no-click"]
        assert device.terminal.announces == BellLabel.PSI_PLUS

    def test_builtin_unknown(self, service):
        """Test unknown builtin names are rejected."""
        with pytest.raises(ValidationError):
            service.builtin("teleporter")

    def test_eta_out_of_range(self, service):
        """Test builder efficiencies must lie in [0, 1]."""
        with pytest.raises(ValidationError):
            service.standard_device(1.1)

    def test_kraus_completeness(self, bell_states):
        """Test eta |a><a| + K^dagger K = I."""
        absorbed = bell_states[BellLabel.PHI_PLUS]
        projector = np.outer(absorbed.amplitudes, absorbed.amplitudes.conj())
        for eta in (0.0, 0.3, 0.5, 1.0):
            k = kraus_operator(absorbed, eta)
            np.testing.assert_allclose(eta * projector + k.conj().T @ k, np.eye(4), atol=1e-12)

    def test_crystal_channel_full_absorption(self, service, bell_states):
        """Test a matching state is absorbed with certainty at eta = 1."""
        p_click, conditional = service.crystal_channel(
            bell_states[BellLabel.PHI_PLUS], bell_states[BellLabel.PHI_PLUS], 1.0
        )
        assert p_click == pytest.approx(1.0)
        assert conditional.norm == 0.0

    def test_crystal_channel_transparent(self, service, bell_states):
        """Test orthogonal states pass unchanged."""
        p_click, conditional = service.crystal_channel(
            bell_states[BellLabel.PSI_MINUS], bell_states[BellLabel.PHI_PLUS], 0.6
        )
        assert p_click == 0.0
        np.testing.assert_allclose(conditional.amplitudes, bell_states[BellLabel.PSI_MINUS].amplitudes, atol=1e-15)

    def test_crystal_channel_half(self, service, bell_states):
        """Test eta = 0.5 on a matching state leaves it renormalized."""
        phi_plus = bell_states[BellLabel.PHI_PLUS]
        p_click, conditional = service.crystal_channel(phi_plus, phi_plus, 0.5)
        assert p_click == pytest.approx(0.5)
        np.testing.assert_allclose(conditional.amplitudes, phi_plus.amplitudes, atol=1e-12)

    def test_crystal_channel_superposition(self, service, bell_states):
        """Test partial absorption of a superposition reshapes the state."""
        state = TwoPhotonState.basis_state("xx")
        p_click, conditional = service.crystal_channel(state, bell_states[BellLabel.PHI_PLUS], 1.0)
        assert p_click == pytest.approx(0.5)
        assert conditional.norm == pytest.approx(1.0)
        assert abs(np.vdot(bell_states[BellLabel.PHI_MINUS].amplitudes, conditional.amplitudes)) == pytest.approx(1.0)

    def test_crystal_channel_mixed(self, service, bell_states):
        """Test the mixed channel matches the pure channel."""
        state = TwoPhotonState.pure([0.6, 0.0, 0.0, 0.8])
        absorbed = bell_states[BellLabel.PHI_PLUS]
        p_pure, pure = service.crystal_channel(state, absorbed, 0.7)
        p_mixed, mixed = service.crystal_channel(state.as_mixed(), absorbed, 0.7)
        assert p_mixed == pytest.approx(p_pure, abs=1e-12)
        np.testing.assert_allclose(mixed.density, pure.to_density(), atol=1e-12)

    @pytest.mark.parametrize("eta", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_correct_detector_probability_is_eta(self, service, bell_states, eta):
        """Test each Bell input meets exactly one matching crystal."""
        matrix = service.confusion_matrix(service.standard_device(eta))
        for label in BELL_ORDER:
            assert matrix.success_probability(label) == pytest.approx(eta, abs=1e-12)
            assert matrix.row(label)["no-click"] == pytest.approx(1 - eta, abs=1e-12)
            assert matrix.error_probability(label) == pytest.approx(0.0, abs=1e-12)

    def test_standard_detectors(self, service, bell_states):
        """Test Psi- lands on detector 3 and Psi+ on detector 4."""
        device = service.standard_device(1.0)
        assert service.propagate_exact(device, bell_states[BellLabel.PSI_MINUS]).probability("3") == pytest.approx(1.0)
        assert service.propagate_exact(device, bell_states[BellLabel.PSI_PLUS]).probability("4") == pytest.approx(1.0)

    def test_shortcut_half_efficiency(self, service, bell_states):
        """Test Phi+ splits between crystal 1 and the photodetector."""
        distribution = service.propagate_exact(service.shortcut_device(0.5), bell_states[BellLabel.PHI_PLUS])
        assert distribution.probability("1") == pytest.approx(0.5)
        assert distribution.probability("4") == pytest.approx(0.5)
        assert distribution.probability("no-click") == pytest.approx(0.0, abs=1e-12)

    def test_shortcut_zero_efficiency(self, service):
        """Test every Bell input reaches the photodetector at eta = 0."""
        matrix = service.confusion_matrix(service.shortcut_device(0.0))
        for label in BELL_ORDER:
            assert matrix.probability(label, "4") == pytest.approx(1.0)

    def test_standard_zero_efficiency(self, service):
        """Test every Bell input leaves unseen at eta = 0."""
        matrix = service.confusion_matrix(service.standard_device(0.0))
        np.testing.assert_allclose(matrix.probabilities[:, -1], np.ones(4))

    def test_probability_conservation(self, service):
        """Test outcome probabilities sum to 1 for a generic input."""
        state = TwoPhotonState.pure([0.3, 0.4j, -0.5, 0.2]).normalized()
        for device in (service.standard_device(0.63), service.shortcut_device(0.41)):
            assert service.propagate_exact(device, state).total() == pytest.approx(1.0, abs=1e-9)

    def test_mixed_input(self, service, bell_states):
        """Test an equal mixture of Phi+ and Psi- splits between detectors 1 and 3."""
        rho = 0.5 * (bell_states[BellLabel.PHI_PLUS].to_density() + bell_states[BellLabel.PSI_MINUS].to_density())
        distribution = service.propagate_exact(service.standard_device(1.0), TwoPhotonState.mixed(rho))
        assert distribution.probability("1") == pytest.approx(0.5)
        assert distribution.probability("3") == pytest.approx(0.5)

    def test_input_renormalized(self, service, bell_states):
        """Test sub-normalized input is rescaled before propagation."""
        half = bell_states[BellLabel.PHI_MINUS].scaled(0.5)
        distribution = service.propagate_exact(service.standard_device(0.8), half)
        assert distribution.probability("2") == pytest.approx(0.8)

    def test_zero_input(self, service):
        """Test the zero state cannot be propagated."""
        with pytest.raises(ValueError):
            service.propagate_exact(service.standard_device(1.0), TwoPhotonState.zero())

    def test_conditional_probabilities(self, service, bell_states):
        """Test conditional click probabilities of the cascade."""
        conditional = service.conditional_click_probabilities(
            service.shortcut_device(0.5), bell_states[BellLabel.PHI_PLUS]
        )
        np.testing.assert_allclose(conditional, [0.5, 0.0, 0.0, 1.0], atol=1e-12)

    def test_monte_carlo_single_trial(self, service, bell_states):
        """Test one trial at eta = 1 clicks detector 1 for Phi+."""
        result = service.propagate_monte_carlo(service.standard_device(1.0), bell_states[BellLabel.PHI_PLUS], 1, seed=0)
        assert result.counts == {"1": 1, "2": 0, "3": 0, "4": 0, "no-click": 0}

    def test_monte_carlo_deterministic(self, service, bell_states):
        """Test a fixed seed reproduces the counts."""
        device = service.standard_device(0.7)
        first = service.propagate_monte_carlo(device, bell_states[BellLabel.PSI_MINUS], 5000, seed=42)
        second = service.propagate_monte_carlo(device, bell_states[BellLabel.PSI_MINUS], 5000, seed=42)
        assert first.counts == second.counts
        assert sum(first.counts.values()) == 5000

    def test_monte_carlo_workers_invariant(self, service, bell_states):
        """Test counts do not depend on the number of workers."""
        device = service.standard_device(0.6)
        trials = 3 * BLOCK_SIZE + 17
        serial = service.propagate_monte_carlo(device, bell_states[BellLabel.PHI_MINUS], trials, seed=7)
        threaded = service.propagate_monte_carlo(device, bell_states[BellLabel.PHI_MINUS], trials, seed=7, workers=4)
        assert serial.counts == threaded.counts

    def test_monte_carlo_streams_are_per_block(self, service, bell_states):
        """Test a full block draws the same counts whatever blocks follow it."""
        device = service.standard_device(0.6)
        one_block = service.propagate_monte_carlo(device, bell_states[BellLabel.PSI_PLUS], BLOCK_SIZE, seed=5)
        one_more = service.propagate_monte_carlo(device, bell_states[BellLabel.PSI_PLUS], BLOCK_SIZE + 1, seed=5)
        differences = [one_more.counts[k] - one_block.counts[k] for k in one_block.counts]
        assert all(d in (0, 1) for d in differences)
        assert sum(differences) == 1

    def test_monte_carlo_env_seed(self, service, bell_states, monkeypatch):
        """Test BELLSCOPE_SEED is used when no seed is given."""
        monkeypatch.setenv("BELLSCOPE_SEED", "11")
        device = service.standard_device(0.5)
        result = service.propagate_monte_carlo(device, bell_states[BellLabel.PHI_PLUS], 1000)
        explicit = service.propagate_monte_carlo(device, bell_states[BellLabel.PHI_PLUS], 1000, seed=11)
        assert result.seed == 11
        assert result.counts == explicit.counts

    def test_monte_carlo_bad_arguments(self, service, bell_states):
        """Test trials and workers must be positive."""
        device = service.standard_device(0.5)
        with pytest.raises(ValueError):
            service.propagate_monte_carlo(device, bell_states[BellLabel.PHI_PLUS], 0, seed=1)
        with pytest.raises(ValueError):
            service.propagate_monte_carlo(device, bell_states[BellLabel.PHI_PLUS], 10, seed=1, workers=0)

    def test_load_device_yaml(self, service, sample_device_file, bell_states):
        """Test loading a YAML device document."""
        device = service.load_device(sample_device_file)
        assert device.name == "two-crystal"
        distribution = service.propagate_exact(device, bell_states[BellLabel.PHI_MINUS])
        assert distribution.probability("2") == pytest.approx(1.0)

    def test_load_device_eta_override(self, service, sample_device_file, bell_states):
        """Test --eta overrides every crystal in a device file."""
        device = service.load_device(sample_device_file, eta=0.3)
        distribution = service.propagate_exact(device, bell_states[BellLabel.PHI_PLUS])
        assert distribution.probability("1") == pytest.approx(0.3)

    def test_load_device_missing(self, service, temp_dir):
        """Test a missing device file is a validation error."""
        with pytest.raises(ValidationError, match="not found"):
            service.load_device(temp_dir / "nope.json")

    def test_load_device_invalid(self, service, temp_dir):
        """Test a malformed device document is a validation error."""
        path = temp_dir / "bad.json"
        path.write_text('{"stages": [{"kind": "crystal"}]}')
        with pytest.raises(ValidationError):
            service.load_device(path)

    def test_crystal_for_model(self, service):
        """Test a crystal built from a G1+ model absorbs Phi+."""
        model = single_level_model(0.0, 3.202, 6.372, IrrepLabel.G1_PLUS)
        stage = service.crystal_for(model, 3.186, 3.186, detector=1, eta=0.9)
        assert stage.eta == 0.9
        overlap = np.vdot(TwoPhotonState.bell(BellLabel.PHI_PLUS).amplitudes, stage.absorbed.amplitudes)
        assert abs(overlap) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_crystal_for_unwired(self):
        """Test crystal_for needs the selection service."""
        model = single_level_model(0.0, 3.202, 6.372)
        with pytest.raises(RuntimeError):
            DeviceService().crystal_for(model, 3.186, 3.186, detector=1)

    def test_custom_absorbed_crystal(self, service):
        """Test a crystal absorbing |xx> only."""
        device = DeviceSpec((StageSpec.crystal(1, 1.0, absorbed=TwoPhotonState.basis_state("xx")),))
        distribution = service.propagate_exact(device, TwoPhotonState.bell(BellLabel.PHI_MINUS))
        assert distribution.probability("1") == pytest.approx(0.5)


class TestCavityService:
    """Tests for CavityService."""

    @pytest.fixture
    def service(self) -> CavityService:
        return CavityService()

    def test_cucl_rate(self, service):
        """Test alpha and the intra-cavity field for CuCl."""
        rate = service.tpa_rate(CavityParams.cucl())
        assert rate.rate == pytest.approx(5.66386e11, rel=1e-5)
        assert rate.field == pytest.approx(8.0036e4, rel=1e-4)

    def test_cucl_requirement(self, service):
        """Test tau_min and Q for CuCl."""
        requirement = service.required_q(CavityParams.cucl())
        assert requirement.tau_min == pytest.approx(1.7656e-12, rel=1e-4)
        assert requirement.q_factor == pytest.approx(8546, rel=1e-3)

    def test_scaling_laws(self, service):
        """Test alpha is inverse in V and inverse-fourth in n."""
        base = CavityParams.cucl()
        alpha = service.tpa_rate(base).rate
        bigger = CavityParams(base.photon_energy, base.refractive_index, base.tpa_coefficient, 2 * base.mode_volume)
        denser = CavityParams(base.photon_energy, 2 * base.refractive_index, base.tpa_coefficient, base.mode_volume)
        stronger = CavityParams(base.photon_energy, base.refractive_index, 3 * base.tpa_coefficient, base.mode_volume)
        assert service.tpa_rate(bigger).rate == pytest.approx(alpha / 2, rel=1e-12)
        assert service.tpa_rate(denser).rate == pytest.approx(alpha / 16, rel=1e-12)
        assert service.tpa_rate(stronger).rate == pytest.approx(3 * alpha, rel=1e-12)

    def test_equivalent_units(self, service):
        """Test the same cavity in other units gives the same alpha."""
        joules = CavityParams.from_units(
            photon_energy=f"{3.186 * 1.602176634e-19!r} J",
            refractive_index=3,
            tpa_coefficient="1e-3 m/W",
            mode_volume="1e-12 cm^3",
        )
        assert service.tpa_rate(joules).rate == pytest.approx(service.tpa_rate(CavityParams.cucl()).rate, rel=1e-9)

    def test_q_identity(self, service):
        """Test Q = omega / alpha over random parameter draws."""
        rng = np.random.default_rng(3)
        for _ in range(20):
            params = CavityParams(
                photon_energy=rng.uniform(1e-19, 1e-18),
                refractive_index=rng.uniform(1.2, 4.0),
                tpa_coefficient=rng.uniform(1e-5, 1e-2),
                mode_volume=rng.uniform(1e-19, 1e-17),
            )
            requirement = service.required_q(params)
            alpha = service.tpa_rate(params).rate
            assert requirement.q_factor == pytest.approx(requirement.angular_frequency / alpha, rel=1e-12)

    def test_q_factor_trivial(self, service):
        """Test Q(1 rad/s, 1 s) = 1."""
        assert service.q_factor(1.0, 1.0) == 1.0

    def test_efficiency(self, service):
        """Test the branching ratio at tau_c = 1/alpha and 10/alpha."""
        alpha = service.tpa_rate(CavityParams.cucl()).rate
        assert service.absorption_efficiency(CavityParams.cucl(1 / alpha)) == pytest.approx(0.5)
        assert service.absorption_efficiency(CavityParams.cucl(10 / alpha)) == pytest.approx(10 / 11)
        assert service.absorption_efficiency(CavityParams.cucl(1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_efficiency_monotone(self, service):
        """Test eta grows with the cavity lifetime and stays in (0, 1)."""
        values = [service.absorption_efficiency(CavityParams.cucl(t)) for t in np.logspace(-14, -9, 12)]
        assert all(0 < v < 1 for v in values)
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_efficiency_needs_lifetime(self, service):
        """Test eta without tau_c is a validation error."""
        with pytest.raises(ValidationError, match="tau_c"):
            service.absorption_efficiency(CavityParams.cucl())

    def test_estimate(self, service):
        """Test the combined record with and without tau_c."""
        assert "eta" not in service.estimate(CavityParams.cucl())
        estimate = service.estimate(CavityParams.cucl(17.6e-12))
        assert estimate["tau_min_ps"] == pytest.approx(1.7656, rel=1e-4)
        assert 0.9 < estimate["eta"] < 0.92
        assert estimate["q_cavity"] == pytest.approx(estimate["angular_frequency_rad_per_s"] * 17.6e-12)

    def test_preset(self, service):
        """Test presets by name."""
        assert service.preset("cucl").refractive_index == 3.0
        with pytest.raises(ValidationError):
            service.preset("gaas")

    def test_load_params(self, service, sample_params_file):
        """Test loading unit-bearing parameters from a file."""
        params = service.load_params(sample_params_file)
        assert service.tpa_rate(params).rate == pytest.approx(service.tpa_rate(CavityParams.cucl()).rate, rel=1e-12)

    def test_load_params_missing(self, service, temp_dir):
        """Test a missing parameter file."""
        with pytest.raises(ValidationError):
            service.load_params(temp_dir / "none.yaml")

    def test_resonance_nondegenerate(self, service):
        """Test a nondegenerate pair on the CuCl biexciton."""
        result = service.check_resonance(ResonanceCheck(w1=1.4, w2=1.786, transition_energy=3.186))
        assert result.resonant_pair
        assert not result.degenerate_single_source_resonant

    def test_resonance_degenerate(self, service):
        """Test w1 = w2 = dE/2 sets both flags."""
        result = service.check_resonance(ResonanceCheck(w1=1.593, w2=1.593, transition_energy=3.186))
        assert result.resonant_pair
        assert result.degenerate_single_source_resonant

    def test_resonance_detuned(self, service):
        """Test a pair ten tolerances off resonance."""
        result = service.check_resonance(ResonanceCheck(w1=1.4, w2=1.796, transition_energy=3.186))
        assert not result.resonant_pair
        assert result.pair_detuning == pytest.approx(0.01)

    def test_resonance_intermediate(self, service):
        """Test the one-photon detuning from the exciton."""
        result = service.check_resonance(
            ResonanceCheck(w1=1.4, w2=1.786, transition_energy=3.186, intermediate_energy=3.202)
        )
        assert result.one_photon_detuning == pytest.approx(1.416)
        assert not result.one_photon_resonant
        assert "one_photon_detuning_eV" in result.to_dict()

    def test_nondegenerate_pair(self, service):
        """Test splitting a transition into two colours."""
        w1, w2 = service.nondegenerate_pair(3.186, 0.386)
        assert (w1, w2) == pytest.approx((1.4, 1.786))
        with pytest.raises(ValidationError):
            service.nondegenerate_pair(3.186, 3.186)


class TestQuantumDotService:
    """Tests for QuantumDotService."""

    @pytest.fixture
    def service(self) -> QuantumDotService:
        return QuantumDotService()

    def _weight(self, target: DotPhotonState, state: DotPhotonState) -> float:
        return abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2

    def test_qd_bell_state(self, service):
        """Test dot-photon Bell states by name."""
        np.testing.assert_allclose(service.qd_bell_state("PsiPlus").amplitudes, [0, R2, R2, 0])

    @pytest.mark.parametrize("source,target", [
        (BellLabel.PHI_PLUS, BellLabel.PSI_PLUS),
        (BellLabel.PHI_MINUS, BellLabel.PSI_MINUS),
        (BellLabel.PSI_PLUS, BellLabel.PHI_PLUS),
        (BellLabel.PSI_MINUS, BellLabel.PHI_MINUS),
    ])
    def test_pi_retarder(self, service, source, target):
        """Test the pi-retarder swaps Phi and Psi."""
        out = service.qd_pi_retarder(service.qd_bell_state(source))
        assert self._weight(service.qd_bell_state(target), out) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("source,target", [
        (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS),
        (BellLabel.PHI_MINUS, BellLabel.PHI_PLUS),
        (BellLabel.PSI_PLUS, BellLabel.PSI_MINUS),
        (BellLabel.PSI_MINUS, BellLabel.PSI_PLUS),
    ])
    def test_half_pi_rotator(self, service, source, target):
        """Test the half-pi rotator flips the relative sign."""
        out = service.qd_half_pi_rotator(service.qd_bell_state(source))
        assert self._weight(service.qd_bell_state(target), out) == pytest.approx(1.0, abs=1e-12)

    def test_rotator_keeps_up_sigma_plus(self, service):
        """Test the rotator is diagonal."""
        state = DotPhotonState.basis_state("up_sigma_plus")
        assert service.qd_half_pi_rotator(state).amplitude("up_sigma_plus") == 1

    def test_involutions(self, service):
        """Test both elements square to the identity."""
        state = DotPhotonState.pure([0.1, 0.5j, -0.7, 0.3]).normalized()
        for element in (service.qd_pi_retarder, service.qd_half_pi_rotator):
            np.testing.assert_allclose(element(element(state)).amplitudes, state.amplitudes, atol=1e-15)

    def test_dot_pass_blocks_all_but_psi_plus(self, service):
        """Test Pauli blocking: only Psi+ is absorbed."""
        p_click, _ = service.dot_pass(service.qd_bell_state(BellLabel.PSI_PLUS), 1.0)
        assert p_click == pytest.approx(1.0)
        for label in (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS, BellLabel.PSI_MINUS):
            state = service.qd_bell_state(label)
            p_click, conditional = service.dot_pass(state, 0.8)
            assert p_click == 0.0
            np.testing.assert_allclose(conditional.amplitudes, state.amplitudes, atol=1e-15)

    def test_dot_pass_superposition(self, service):
        """Test (Psi+ + Psi-)/sqrt 2 at eta = 0.5 clicks with 1/4."""
        state = DotPhotonState.pure(
            (DotPhotonState.bell(BellLabel.PSI_PLUS).amplitudes + DotPhotonState.bell(BellLabel.PSI_MINUS).amplitudes) * R2
        )
        p_click, conditional = service.dot_pass(state, 0.5)
        assert p_click == pytest.approx(0.25)
        assert isinstance(conditional, DotPhotonState)

    def test_assign_passes(self, service):
        """Test the default schedule assigns every input a pass."""
        assert service.assign_passes() == {
            BellLabel.PSI_PLUS: 1,
            BellLabel.PSI_MINUS: 2,
            BellLabel.PHI_MINUS: 3,
            BellLabel.PHI_PLUS: 4,
        }

    def test_pass_probabilities_partial(self, service):
        """Test Phi+ at eta = 0.5 clicks only at the last pass."""
        probabilities = service.pass_probabilities(service.qd_bell_state(BellLabel.PHI_PLUS), 0.5)
        assert probabilities["4"] == pytest.approx(0.5)
        assert probabilities["no-click"] == pytest.approx(0.5)
        assert probabilities["1"] == 0.0

    def test_protocol_zero_efficiency(self, service):
        """Test eta = 0 sends every input to no-click."""
        result = service.four_pass_protocol(0.0)
        np.testing.assert_allclose(result.confusion.probabilities[:, -1], np.ones(4))

    def test_protocol_bad_eta(self, service):
        """Test eta outside [0, 1] is rejected."""
        with pytest.raises(ValueError):
            service.four_pass_protocol(1.5)

    def test_protocol_result_dict(self, service):
        """Test the protocol artifact lists assignment and detection times."""
        from bellscope.services import default_schedule

        data = service.four_pass_protocol(1.0, default_schedule(pass_interval=3e-9)).to_dict()
        assert data["assignment"]["PsiPlus"] == 1
        assert data["detection_times"]["4"] == pytest.approx(9e-9)
        assert data["outcomes"] == ["1", "2", "3", "4", "no-click"]
        assert data["announcements"]["3"] == "PhiMinus"
