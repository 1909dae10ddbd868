"""
Bellscope domain models.

These models represent the core entities of a Bell-state-measurement
simulation: two-photon and dot-photon states, polarization elements,
cubic-group selection-rule data, device descriptions, outcome tables,
cavity parameters and run configuration.
"""

from .bell_label import BellLabel, BELL_ORDER
from .two_photon_state import BipartiteState, PolarizationBasis, TwoPhotonState, TWO_PHOTON_BASIS
from .jones_operator import JonesOperator
from .irrep import IrrepLabel, SymmetryClass, PRODUCT_IRREPS
from .cg_table import CGTable, PAIR_LABELS, ROW_INDEX
from .transition_model import FinalLevel, IntermediateLevel, TransitionModel, single_level_model
from .stage_spec import StageKind, StageSpec
from .device_spec import DeviceSpec, NO_CLICK
from .outcome import MonteCarloResult, OutcomeDistribution
from .confusion_matrix import ConfusionMatrix
from .cavity_params import CavityParams, QRequirement, ResonanceCheck, ResonanceResult, TPARate
from .dot_photon_state import DotPhotonState, PassElement, PassElementKind, PassSchedule, ProtocolResult
from .run_config import Command, OutputFormat, RunConfig, SimulationMode

__all__ = [
    "BellLabel",
    "BELL_ORDER",
    "BipartiteState",
    "PolarizationBasis",
    "TwoPhotonState",
    "TWO_PHOTON_BASIS",
    "JonesOperator",
    "IrrepLabel",
    "SymmetryClass",
    "PRODUCT_IRREPS",
    "CGTable",
    "PAIR_LABELS",
    "ROW_INDEX",
    "FinalLevel",
    "IntermediateLevel",
    "TransitionModel",
    "single_level_model",
    "StageKind",
    "StageSpec",
    "DeviceSpec",
    "NO_CLICK",
    "MonteCarloResult",
    "OutcomeDistribution",
    "ConfusionMatrix",
    "CavityParams",
    "QRequirement",
    "ResonanceCheck",
    "ResonanceResult",
    "TPARate",
    "DotPhotonState",
    "PassElement",
    "PassElementKind",
    "PassSchedule",
    "ProtocolResult",
    "Command",
    "OutputFormat",
    "RunConfig",
    "SimulationMode",
]
