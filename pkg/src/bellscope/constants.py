"""
Physical constants and unit conversions.

Constants come from scipy.constants (CODATA) and are frozen here so every
calculation in the package reads them from one table.
"""

import re

from scipy import constants as codata

from bellscope.errors import UnitError

SPEED_OF_LIGHT = codata.c  # m/s
VACUUM_PERMITTIVITY = codata.epsilon_0  # F/m
HBAR = codata.hbar  # J s
ELECTRON_VOLT = codata.electron_volt  # J

# Dimension -> unit string -> factor to SI
UNITS: dict[str, dict[str, float]] = {
    "energy": {
        "J": 1.0,
        "eV": ELECTRON_VOLT,
        "meV": codata.milli * ELECTRON_VOLT,
    },
    "tpa_coefficient": {
        "m/W": 1.0,
        "cm/W": codata.centi,
        "cm/GW": codata.centi / codata.giga,
    },
    "volume": {
        "m^3": 1.0,
        "cm^3": codata.centi ** 3,
        "um^3": codata.micro ** 3,
        "µm^3": codata.micro ** 3,
        "nm^3": codata.nano ** 3,
    },
    "time": {
        "s": 1.0,
        "ms": codata.milli,
        "ns": codata.nano,
        "ps": codata.pico,
        "fs": codata.femto,
    },
    "dimensionless": {
        "": 1.0,
        "1": 1.0,
    },
}

SI_UNIT = {
    "energy": "J",
    "tpa_coefficient": "m/W",
    "volume": "m^3",
    "time": "s",
    "dimensionless": "",
}

_QUANTITY_PATTERN = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def to_si(value: float, unit: str, dimension: str) -> float:
    """
    Convert a value in the given unit to SI.

    Raises:
        UnitError: If the unit is unknown or belongs to another dimension
    """
    table = UNITS.get(dimension)
    if table is None:
        raise UnitError(f"Unknown dimension: {dimension}")
    if unit not in table:
        allowed = ", ".join(u for u in table if u) or "(none)"
        raise UnitError(f"Unit {unit!r} is not a valid {dimension} unit (allowed: {allowed})")
    return float(value) * table[unit]


def from_si(value: float, unit: str, dimension: str) -> float:
    """Convert an SI value to the given unit."""
    return value / to_si(1.0, unit, dimension)


def parse_quantity(raw: object, dimension: str) -> float:
    """
    Parse a quantity and return its SI value.

    Accepts {"value": 3.186, "unit": "eV"}, "3.186 eV", or a bare number
    (only for dimensionless quantities).

    Raises:
        UnitError: If the unit is missing, unknown, or of the wrong dimension
    """
    if isinstance(raw, dict):
        if "value" not in raw:
            raise UnitError(f"Quantity object needs a 'value': {raw}")
        unit = raw.get("unit", "")
        try:
            value = float(raw["value"])
        except (TypeError, ValueError):
            raise UnitError(f"Quantity value must be a number: {raw['value']!r}")
        return to_si(value, str(unit), dimension)

    if isinstance(raw, str):
        match = _QUANTITY_PATTERN.match(raw)
        if not match:
            raise UnitError(f"Cannot parse quantity: {raw!r}")
        try:
            value = float(match.group(1))
        except ValueError:
            raise UnitError(f"Cannot parse quantity: {raw!r}")
        return to_si(value, match.group(2), dimension)

    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        if dimension != "dimensionless":
            raise UnitError(f"A {dimension} quantity needs an explicit unit, got bare {raw}")
        return float(raw)

    raise UnitError(f"Cannot parse quantity: {raw!r}")
