"""
Run configuration for the Bellscope CLI.

A RunConfig is built from command-line flags or from a --config document
(JSON or YAML) with the same field names.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from bellscope.errors import ValidationError

BUILTIN_DEVICES = ("standard", "shortcut")
CAVITY_PRESETS = ("cucl",)


class Command(Enum):
    """CLI commands."""
    SIMULATE = "simulate"
    CONFUSION = "confusion"
    SELECTION = "selection"
    PARAMS = "params"
    QDOT = "qdot"


class OutputFormat(Enum):
    """Artifact formats."""
    JSON = "json"
    CSV = "csv"


class SimulationMode(Enum):
    """Propagation modes for the simulate command."""
    EXACT = "exact"
    MONTECARLO = "montecarlo"


_TEXT_FIELDS = {
    "device": "device",
    "device_file": "device_file",
    "input_label": "input",
    "output": "output",
    "preset": "preset",
    "params_file": "params_file",
    "model_file": "model_file",
}


def parse_amplitude(raw: object) -> complex:
    """Parse one amplitude: a number, "0.5+0.5j", or [re, im]."""
    if isinstance(raw, (list, tuple)):
        if len(raw) != 2:
            raise ValidationError(f"Amplitude pair must be [re, im], got {raw!r}")
        return complex(float(raw[0]), float(raw[1]))
    if isinstance(raw, str):
        try:
            return complex(raw.strip().replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ValidationError(f"Cannot parse amplitude {raw!r}")
    if isinstance(raw, (int, float, complex)) and not isinstance(raw, bool):
        return complex(raw)
    raise ValidationError(f"Cannot parse amplitude {raw!r}")


@dataclass
class RunConfig:
    """Configuration of a single CLI run."""
    command: Command
    device: Optional[str] = None
    device_file: Optional[str] = None
    eta: Optional[float] = None
    input_label: Optional[str] = None
    amplitudes: Optional[list[complex]] = None
    mode: SimulationMode = SimulationMode.EXACT
    trials: int = 10000
    seed: Optional[int] = None
    workers: int = 1
    output_format: OutputFormat = OutputFormat.JSON
    output: Optional[str] = None
    preset: Optional[str] = None
    params_file: Optional[str] = None
    tau_c: Optional[float] = None
    model_file: Optional[str] = None
    w1: Optional[float] = None
    w2: Optional[float] = None
    delta_e: Optional[float] = None
    tolerance: float = 1e-3
    intermediate: Optional[float] = None

    def validate(self) -> list[str]:
        """
        Check the configuration.

        Returns:
            List of problems (empty if valid)
        """
        errors = []

        for attr, key in _TEXT_FIELDS.items():
            value = getattr(self, attr)
            if value is not None and not isinstance(value, str):
                errors.append(f"{key} must be a string, got {value!r}")
        if errors:
            return errors

        if self.eta is not None and not 0.0 <= self.eta <= 1.0:
            errors.append(f"eta must lie in [0, 1], got {self.eta}")

        if self.command in (Command.SIMULATE, Command.CONFUSION):
            if self.device and self.device_file:
                errors.append("--device and --device-file are mutually exclusive")
            if self.device and self.device not in BUILTIN_DEVICES:
                errors.append(f"Unknown builtin device {self.device!r} (expected {', '.join(BUILTIN_DEVICES)})")

        if self.command in (Command.SIMULATE, Command.SELECTION):
            if self.input_label and self.amplitudes:
                errors.append("--input and --amplitudes are mutually exclusive")
            if not self.input_label and not self.amplitudes:
                errors.append(f"{self.command.value} needs --input or --amplitudes")
            if self.amplitudes is not None and len(self.amplitudes) != 4:
                errors.append(f"Exactly 4 amplitudes are required, got {len(self.amplitudes)}")

        if self.command == Command.SIMULATE and self.mode == SimulationMode.MONTECARLO:
            if self.trials < 1:
                errors.append(f"trials must be at least 1, got {self.trials}")
            if self.seed is not None and self.seed < 0:
                errors.append(f"seed must be non-negative, got {self.seed}")
            if self.workers < 1:
                errors.append(f"workers must be at least 1, got {self.workers}")

        if self.command == Command.PARAMS:
            if self.preset and self.params_file:
                errors.append("--preset and --params-file are mutually exclusive")
            if self.preset and self.preset not in CAVITY_PRESETS:
                errors.append(f"Unknown preset {self.preset!r} (expected {', '.join(CAVITY_PRESETS)})")
            if self.tau_c is not None and not self.tau_c > 0:
                errors.append(f"tau-c must be positive, got {self.tau_c}")
            resonance = (self.w1, self.w2, self.delta_e)
            if any(v is not None for v in resonance) and any(v is None for v in resonance):
                errors.append("Resonance check needs --w1, --w2 and --delta-e together")
            if not self.tolerance > 0:
                errors.append(f"tolerance must be positive, got {self.tolerance}")

        if self.command == Command.SELECTION and self.model_file:
            if self.w1 is None or self.w2 is None:
                errors.append("A transition model needs --w1 and --w2")

        return errors

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        """
        Create RunConfig from a configuration document.

        Raises:
            ValidationError: If the document is malformed
        """
        if not isinstance(data, dict):
            raise ValidationError("Configuration document must be a mapping")

        schema = data.get("schema", 1)
        if schema != 1:
            raise ValidationError(f"Unsupported configuration schema: {schema}")

        try:
            command = Command(data["command"])
            mode = SimulationMode(data.get("mode", "exact"))
            output_format = OutputFormat(data.get("format", "json"))
        except KeyError as e:
            raise ValidationError(f"Configuration is missing field {e}")
        except (TypeError, ValueError) as e:
            raise ValidationError(str(e))

        def optional_float(key: str) -> Optional[float]:
            value = data.get(key)
            return None if value is None else float(value)

        try:
            amplitudes = data.get("amplitudes")
            if amplitudes is not None:
                amplitudes = [parse_amplitude(a) for a in amplitudes]
            return cls(
                command=command,
                device=data.get("device"),
                device_file=data.get("device_file"),
                eta=optional_float("eta"),
                input_label=data.get("input"),
                amplitudes=amplitudes,
                mode=mode,
                trials=int(data.get("trials", 10000)),
                seed=None if data.get("seed") is None else int(data["seed"]),
                workers=int(data.get("workers", 1)),
                output_format=output_format,
                output=data.get("output"),
                preset=data.get("preset"),
                params_file=data.get("params_file"),
                tau_c=optional_float("tau_c"),
                model_file=data.get("model_file"),
                w1=optional_float("w1"),
                w2=optional_float("w2"),
                delta_e=optional_float("delta_e"),
                tolerance=float(data.get("tolerance", 1e-3)),
                intermediate=optional_float("intermediate"),
            )
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Invalid configuration value: {e}")

    def to_dict(self) -> dict:
        """Convert to dictionary, omitting unset fields."""
        data = {
            "schema": 1,
            "command": self.command.value,
            "device": self.device,
            "device_file": self.device_file,
            "eta": self.eta,
            "input": self.input_label,
            "amplitudes": None if self.amplitudes is None else [[a.real, a.imag] for a in self.amplitudes],
            "mode": self.mode.value,
            "trials": self.trials,
            "seed": self.seed,
            "workers": self.workers,
            "format": self.output_format.value,
            "output": self.output,
            "preset": self.preset,
            "params_file": self.params_file,
            "tau_c": self.tau_c,
            "model_file": self.model_file,
            "w1": self.w1,
            "w2": self.w2,
            "delta_e": self.delta_e,
            "tolerance": self.tolerance,
            "intermediate": self.intermediate,
        }
        return {k: v for k, v in data.items() if v is not None}
