"""
Bellscope services.

These services provide the simulation logic: polarization algebra,
cubic-group selection rules, device propagation, cavity estimates and
the quantum-dot protocol.
"""

from .polarization_service import PolarizationService
from .selection_rule_service import SelectionRuleService, build_cg_table
from .device_service import DeviceService
from .cavity_service import CavityService
from .quantum_dot_service import QuantumDotService, default_schedule

__all__ = [
    "PolarizationService",
    "SelectionRuleService",
    "build_cg_table",
    "DeviceService",
    "CavityService",
    "QuantumDotService",
    "default_schedule",
]
