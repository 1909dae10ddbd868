"""
Bellscope - Bell-state-measurement simulator

Simulates complete Bell-state measurement with cascaded two-photon
absorbing crystals, the cubic-group selection rules behind it, cavity
feasibility estimates and the quantum-dot variant.
"""

__version__ = "1.0.0"

from .bellscope import BellScope
from .utils import configure_logging, resolve_seed

__all__ = [
    "BellScope",
    "configure_logging",
    "resolve_seed",
    "__version__",
]
