"""
Device service for Bellscope.

Propagates two-photon states through a Bell-state-measurement cascade.
Every crystal is a two-outcome measurement: with absorbed state |a> and
efficiency eta it clicks with probability eta <a|rho|a> and otherwise
applies K = sqrt(I - eta |a><a|). Linear elements never change the norm;
a photodetector clicks on whatever mass reaches it.

Monte Carlo sampling uses the fact that the no-click branch is
deterministic: the conditional click probability of every measurement
stage is computed once from the exact propagation, and each trial draws
one uniform number per stage.
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Union

import numpy as np
import yaml

from bellscope.errors import ValidationError
from bellscope.models.bell_label import BELL_ORDER, BellLabel
from bellscope.models.cg_table import CGTable
from bellscope.models.confusion_matrix import ConfusionMatrix
from bellscope.models.device_spec import DeviceSpec
from bellscope.models.jones_operator import JonesOperator
from bellscope.models.outcome import MonteCarloResult, OutcomeDistribution
from bellscope.models.run_config import BUILTIN_DEVICES
from bellscope.models.stage_spec import StageKind, StageSpec
from bellscope.models.transition_model import TransitionModel
from bellscope.models.two_photon_state import NORM_TOLERANCE, BipartiteState, TwoPhotonState
from bellscope.utils import log_info, log_operation, resolve_seed

BLOCK_SIZE = 8192
ZERO_MASS = 1e-15

_STANDARD_ANNOUNCEMENTS = {
    1: BellLabel.PHI_PLUS,
    2: BellLabel.PHI_MINUS,
    3: BellLabel.PSI_MINUS,
    4: BellLabel.PSI_PLUS,
}


def kraus_operator(absorbed: BipartiteState, eta: float) -> np.ndarray:
    """
    No-click Kraus operator sqrt(I - eta |a><a|).

    |a><a| is a projector, so the square root is
    I - (1 - sqrt(1 - eta)) |a><a|.
    """
    projector = np.outer(absorbed.amplitudes, absorbed.amplitudes.conj())
    return np.eye(4) - (1.0 - np.sqrt(1.0 - eta)) * projector


def absorb(state: BipartiteState, absorbed: BipartiteState, eta: float) -> tuple[float, BipartiteState]:
    """
    Click probability and the unnormalized no-click state K rho K^dagger.

    The click probability is absolute: it is a share of the input's own
    norm, so the two outcomes together carry exactly that norm.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"Efficiency must lie in [0, 1], got {eta}")
    if not absorbed.is_pure or abs(absorbed.norm - 1.0) > NORM_TOLERANCE:
        raise ValueError("Absorbed state must be pure and normalized")

    a = absorbed.amplitudes
    if state.is_pure:
        weight = abs(np.vdot(a, state.amplitudes)) ** 2
    else:
        weight = float(np.real(np.vdot(a, state.density @ a)))
    p_click = max(0.0, eta * weight)
    return p_click, state.transformed(kraus_operator(absorbed, eta))


def kraus_channel(state: BipartiteState, absorbed: BipartiteState, eta: float) -> tuple[float, BipartiteState]:
    """
    Two-outcome absorption channel.

    Returns:
        (p_click, conditional) where the conditional no-click state is
        rescaled to the input norm, or the zero state when the input is
        absorbed completely
    """
    p_click, remainder = absorb(state, absorbed, eta)
    mass = state.norm
    remaining = mass - p_click
    if remaining <= ZERO_MASS * max(mass, 1.0):
        zero = type(state).zero() if state.is_pure else type(state).mixed(np.zeros((4, 4)))
        return p_click, zero
    return p_click, remainder.scaled(np.sqrt(mass / remaining))


class DeviceService:
    """
    Builds devices and propagates states through them.

    Usage:
        devices = DeviceService()
        device = devices.standard_device(0.9)
        distribution = devices.propagate_exact(device, TwoPhotonState.bell(BellLabel.PSI_MINUS))
    """

    def __init__(self):
        self._selection_service = None

    def set_services(self, selection=None) -> None:
        """Inject service dependencies."""
        if selection:
            self._selection_service = selection

    # =========================================================================
    # Builders
    # =========================================================================

    def standard_device(self, eta: float = 1.0) -> DeviceSpec:
        """
        Four Phi+-absorbing crystals separated by linear elements.

        crystal 1 -> retarder_both -> crystal 2 -> rotator(1, pi/2) ->
        crystal 3 -> retarder_both -> crystal 4. Each Bell input meets
        exactly one crystal that matches it.
        """
        self._check_eta(eta)
        stages = (
            StageSpec.crystal(1, eta, announces=_STANDARD_ANNOUNCEMENTS[1]),
            StageSpec.retarder_both(),
            StageSpec.crystal(2, eta, announces=_STANDARD_ANNOUNCEMENTS[2]),
            StageSpec.rotator(1, np.pi / 2),
            StageSpec.crystal(3, eta, announces=_STANDARD_ANNOUNCEMENTS[3]),
            StageSpec.retarder_both(),
            StageSpec.crystal(4, eta, announces=_STANDARD_ANNOUNCEMENTS[4]),
        )
        return DeviceSpec(stages, None, name="standard", description="Four-crystal complete BSM")

    def shortcut_device(self, eta: float = 1.0) -> DeviceSpec:
        """
        Three crystals and an ordinary photodetector read as Psi+.

        Pairs the crystals fail to absorb reach the photodetector and are
        mislabeled Psi+.
        """
        standard = self.standard_device(eta)
        stages = standard.stages[:-1]
        terminal = StageSpec.photodetector(4, announces=BellLabel.PSI_PLUS)
        return DeviceSpec(stages, terminal, name="shortcut", description="Three crystals and a photodetector")

    def builtin(self, name: str, eta: float = 1.0) -> DeviceSpec:
        """
        Builtin device by name.

        Raises:
            ValidationError: If the name is unknown
        """
        if name == "standard":
            return self.standard_device(eta)
        if name == "shortcut":
            return self.shortcut_device(eta)
        raise ValidationError(f"Unknown builtin device {name!r} (expected {', '.join(BUILTIN_DEVICES)})")

    def load_device(self, path: Union[str, Path], eta: Optional[float] = None) -> DeviceSpec:
        """
        Load a device document (JSON or YAML).

        Args:
            path: Device file
            eta: If given, overrides every crystal efficiency

        Raises:
            ValidationError: If the file is missing or malformed
        """
        path = Path(path)
        if not path.exists():
            raise ValidationError(f"Device file not found: {path}")
        try:
            data = yaml.safe_load(path.read_text())
        except yaml.YAMLError as e:
            raise ValidationError(f"Cannot parse device file {path}: {e}")
        if not isinstance(data, dict):
            raise ValidationError(f"Device file {path} must hold an object")
        if data.get("schema", 1) != 1:
            raise ValidationError(f"Unsupported device schema: {data.get('schema')}")
        try:
            device = DeviceSpec.from_dict(data)
            if eta is not None:
                self._check_eta(eta)
                crystals = [s.detector for s in device.stages if s.kind == StageKind.CRYSTAL]
                device = device.with_efficiencies({d: eta for d in crystals})
        except (AttributeError, IndexError, KeyError, TypeError, ValueError) as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f"Invalid device file {path}: {e}")
        log_operation("DEVICE_LOADED", f"{path} stages={len(device.stages)}")
        return device

    def crystal_for(
            self,
            model: TransitionModel,
            w1: float,
            w2: float,
            detector: int,
            eta: float = 1.0,
            cg: Optional[CGTable] = None,
            announces: Optional[BellLabel] = None,
    ) -> StageSpec:
        """
        Crystal stage absorbing the state selected by a transition model.

        Raises:
            RuntimeError: If no selection service is wired
        """
        if self._selection_service is None:
            raise RuntimeError("Selection service not configured")
        absorbed = self._selection_service.absorbed_state(model, w1, w2, cg)
        return StageSpec.crystal(detector, eta, absorbed=absorbed, announces=announces)

    # =========================================================================
    # Channels
    # =========================================================================

    def crystal_channel(
            self,
            state: TwoPhotonState,
            absorbed: TwoPhotonState,
            eta: float,
    ) -> tuple[float, TwoPhotonState]:
        """
        Crystal measurement: (p_click, conditional no-click state).

        p_click = eta <a|rho|a>. The conditional state keeps the input norm;
        if the whole input is absorbed it is the zero state.
        """
        return kraus_channel(state, absorbed, eta)

    def _apply_linear(self, stage: StageSpec, state: TwoPhotonState) -> TwoPhotonState:
        if stage.kind == StageKind.RETARDER_BOTH:
            qwp = JonesOperator.quarter_wave()
            return state.transformed(np.kron(qwp.matrix, qwp.matrix))
        rotator = JonesOperator.rotator(stage.angle)
        identity = JonesOperator.identity()
        if stage.photon == 1:
            return state.transformed(np.kron(rotator.matrix, identity.matrix))
        return state.transformed(np.kron(identity.matrix, rotator.matrix))

    def _stage_probabilities(self, device: DeviceSpec, state: TwoPhotonState) -> list[float]:
        """Absolute click probability of every measurement stage, in order."""
        probabilities = []
        for stage in device.all_stages():
            if stage.kind == StageKind.CRYSTAL:
                p_click, state = absorb(state, stage.absorbed, stage.eta)
                probabilities.append(p_click)
            elif stage.kind == StageKind.PHOTODETECTOR:
                probabilities.append(max(0.0, state.norm))
                state = state.scaled(0.0)
            else:
                state = self._apply_linear(stage, state)
        return probabilities

    def _prepare_input(self, state: TwoPhotonState) -> TwoPhotonState:
        if state.norm <= 0.0:
            raise ValueError("Cannot propagate a zero state")
        return state.normalized()

    # =========================================================================
    # Propagation
    # =========================================================================

    def propagate_exact(self, device: DeviceSpec, state: TwoPhotonState) -> OutcomeDistribution:
        """
        Exact outcome distribution of a device.

        Non-normalized input is renormalized first. The distribution lists
        every detector in propagation order and then no-click.

        Raises:
            ValueError: If the input is the zero state
        """
        state = self._prepare_input(state)
        probabilities = self._stage_probabilities(device, state)
        labels = device.outcome_labels()
        no_click = max(0.0, 1.0 - sum(probabilities))
        distribution = OutcomeDistribution(dict(zip(labels, probabilities + [no_click])))
        log_operation("PROPAGATE_EXACT", f"device={device.name} total={distribution.total():.12g}")
        return distribution

    def conditional_click_probabilities(self, device: DeviceSpec, state: TwoPhotonState) -> np.ndarray:
        """
        Click probability of each measurement stage given no earlier click.
        """
        state = self._prepare_input(state)
        absolute = self._stage_probabilities(device, state)
        conditional = np.zeros(len(absolute))
        remaining = 1.0
        for k, p in enumerate(absolute):
            if remaining > ZERO_MASS:
                conditional[k] = min(1.0, p / remaining)
            remaining -= p
        return conditional

    def propagate_monte_carlo(
            self,
            device: DeviceSpec,
            state: TwoPhotonState,
            trials: int,
            seed: Optional[int] = None,
            workers: int = 1,
    ) -> MonteCarloResult:
        """
        Sample outcome counts.

        Trials are split into blocks of BLOCK_SIZE. The random stream is
        per block, not per trial: block b draws all of its trials from one
        Philox generator seeded with the b-th child of SeedSequence(seed).
        Counts therefore depend only on (seed, trials) and never on
        `workers`, but a trial's draw depends on its position in its block.

        Raises:
            ValueError: If trials < 1 or workers < 1
        """
        if trials < 1:
            raise ValueError(f"trials must be at least 1, got {trials}")
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        seed = resolve_seed(seed)

        conditional = self.conditional_click_probabilities(device, state)
        labels = device.outcome_labels()
        n_blocks = -(-trials // BLOCK_SIZE)
        children = np.random.SeedSequence(seed).spawn(n_blocks)
        sizes = [min(BLOCK_SIZE, trials - b * BLOCK_SIZE) for b in range(n_blocks)]

        def run_block(b: int) -> np.ndarray:
            rng = np.random.Generator(np.random.Philox(children[b]))
            return _sample_block(rng, sizes[b], conditional)

        if workers == 1 or n_blocks == 1:
            blocks = [run_block(b) for b in range(n_blocks)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                blocks = list(pool.map(run_block, range(n_blocks)))

        totals = np.sum(blocks, axis=0)
        counts = {label: int(c) for label, c in zip(labels, totals)}
        log_info(f"Monte Carlo: {trials} trials, seed {seed}, {n_blocks} blocks, {workers} workers")
        return MonteCarloResult(counts=counts, trials=trials, seed=seed)

    def confusion_matrix(self, device: DeviceSpec) -> ConfusionMatrix:
        """Exact outcome distribution of each Bell input."""
        labels = device.outcome_labels()
        rows = []
        for label in BELL_ORDER:
            distribution = self.propagate_exact(device, TwoPhotonState.bell(label))
            rows.append([distribution.probability(o) for o in labels])
        return ConfusionMatrix(
            inputs=BELL_ORDER,
            outcomes=tuple(labels),
            probabilities=np.array(rows),
            announcements=device.announcements(),
        )

    def _check_eta(self, eta: float) -> None:
        if not 0.0 <= eta <= 1.0:
            raise ValidationError(f"eta must lie in [0, 1], got {eta}")


def _sample_block(rng: np.random.Generator, size: int, conditional: np.ndarray) -> np.ndarray:
    """Counts per outcome (stages, then no-click) for one block of trials."""
    stages = len(conditional)
    uniforms = rng.random((size, stages))
    clicks = uniforms < conditional
    first = np.where(clicks.any(axis=1), clicks.argmax(axis=1), stages)
    return np.bincount(first, minlength=stages + 1)
