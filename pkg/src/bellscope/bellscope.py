"""
Bellscope - Bell-state-measurement simulator

Main entry point class that composes all services and provides a unified
interface for Bellscope operations.
"""

from typing import Optional

from bellscope.models.cg_table import CGTable
from bellscope.services.cavity_service import CavityService
from bellscope.services.device_service import DeviceService
from bellscope.services.polarization_service import PolarizationService
from bellscope.services.quantum_dot_service import QuantumDotService
from bellscope.services.selection_rule_service import SelectionRuleService


class BellScope:
    """
    Main entry point for Bellscope operations.

    Usage:
        scope = BellScope()

        # Polarization algebra
        phi_minus = scope.polarization.bell_state("PhiMinus")
        phi_plus = scope.polarization.quarter_wave_both(phi_minus)

        # Selection rules
        g = scope.selection.bell_geometrical_factor(IrrepLabel.G1_PLUS, 0, BellLabel.PHI_PLUS)

        # Devices
        device = scope.devices.standard_device(0.9)
        matrix = scope.devices.confusion_matrix(device)

        # Cavity estimates
        q = scope.cavity.required_q(CavityParams.cucl())

        # Quantum dot
        result = scope.qdot.four_pass_protocol(1.0)
    """

    def __init__(self, cg: Optional[CGTable] = None):
        """
        Initialize Bellscope.

        Args:
            cg: Clebsch-Gordan table to use instead of the frozen one
        """
        self.polarization = PolarizationService()
        self.selection = SelectionRuleService(cg)
        self.devices = DeviceService()
        self.cavity = CavityService()
        self.qdot = QuantumDotService()

        # Wire up service dependencies
        self.devices.set_services(selection=self.selection)
