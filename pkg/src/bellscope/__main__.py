"""
Bellscope CLI entry point.

Usage:
    python -m bellscope <command> [options]
    python -m bellscope --config run.yaml

Commands:
    simulate    Propagate one input state through a device
                (--device standard|shortcut | --device-file PATH) [--eta]
                (--input LABEL | --amplitudes A B C D)
                [--mode exact|montecarlo --trials N --seed S --workers W]
    confusion   Confusion matrix of a device over the four Bell inputs
    selection   Geometrical factors of a state; TPA rate and absorbed
                state with --model PATH --w1 EV --w2 EV
    params      Cavity feasibility numbers (--preset cucl | --params-file PATH)
                [--tau-c TIME] [--w1 --w2 --delta-e [--tol] [--intermediate]]
    qdot        Four-pass quantum-dot protocol [--eta]

Every command takes --format json|csv and --output PATH.

Exit codes:
    0  success
    1  unexpected failure (e.g. unwritable output)
    2  malformed command line, configuration or input document
    3  physically invalid request (e.g. a photon on an intermediate resonance)

Environment:
    BELLSCOPE_SEED  Monte Carlo seed when --seed is not given
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from bellscope import BellScope, __version__
from bellscope.constants import parse_quantity
from bellscope.errors import PhysicsDomainError, UnitError, ValidationError
from bellscope.models.bell_label import BellLabel
from bellscope.models.cavity_params import ResonanceCheck
from bellscope.models.device_spec import DeviceSpec
from bellscope.models.run_config import (
    BUILTIN_DEVICES,
    CAVITY_PRESETS,
    Command,
    OutputFormat,
    RunConfig,
    SimulationMode,
    parse_amplitude,
)
from bellscope.models.transition_model import TransitionModel
from bellscope.models.two_photon_state import TwoPhotonState
from bellscope.utils import (
    configure_logging,
    format_number,
    log_error,
    round_number,
    to_csv_text,
    to_json_text,
    write_artifact,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_PHYSICS = 3


def print_error(msg: str) -> None:
    print(f"Error: {msg}", file=sys.stderr)


# =============================================================================
# Argument parsing
# =============================================================================

def _time_argument(raw: str) -> float:
    """Seconds from "1e-11" or "17.6 ps"."""
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        return parse_quantity(raw, "time")
    except UnitError as e:
        raise argparse.ArgumentTypeError(str(e))


def _amplitude_argument(raw: str) -> complex:
    try:
        return parse_amplitude(raw)
    except ValidationError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    """Command-line parser with one subcommand per RunConfig command."""
    parser = argparse.ArgumentParser(
        prog="bellscope",
        description="Bell-state-measurement simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--version", action="version", version=f"bellscope {__version__}")
    parser.add_argument("--config", type=Path, help="JSON or YAML document mirroring the command-line options")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at debug level")
    parser.add_argument("--log-file", type=Path, help="Also write logs to this file")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    output.add_argument("--output", "-o", help="Write the artifact here instead of stdout")

    device = argparse.ArgumentParser(add_help=False)
    device.add_argument("--device", choices=BUILTIN_DEVICES, help="Builtin device (default: standard)")
    device.add_argument("--device-file", help="Device document (JSON or YAML)")
    device.add_argument("--eta", type=float, help="Crystal efficiency in [0, 1]")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--input", dest="input_label", help="Bell state: PhiPlus, PhiMinus, PsiPlus, PsiMinus")
    state.add_argument(
        "--amplitudes",
        nargs=4,
        type=_amplitude_argument,
        metavar=("XX", "XY", "YX", "YY"),
        help="Raw amplitudes, e.g. 0.5 0.5j 0 0.5; normalized before use",
    )

    commands = parser.add_subparsers(dest="command", metavar="<command>")

    simulate = commands.add_parser(
        "simulate", parents=[device, state, output], help="Propagate one input through a device"
    )
    simulate.add_argument("--mode", choices=[m.value for m in SimulationMode], default=SimulationMode.EXACT.value)
    simulate.add_argument("--trials", type=int, default=10000)
    simulate.add_argument("--seed", type=int, help="Monte Carlo seed (default: $BELLSCOPE_SEED, then 0)")
    simulate.add_argument("--workers", type=int, default=1, help="Threads for Monte Carlo blocks")

    commands.add_parser("confusion", parents=[device, output], help="Confusion matrix of a device")

    selection = commands.add_parser("selection", parents=[state, output], help="Selection-rule analysis")
    selection.add_argument("--model", dest="model_file", help="Transition model document (JSON or YAML)")
    selection.add_argument("--w1", type=float, help="Photon 1 energy in eV")
    selection.add_argument("--w2", type=float, help="Photon 2 energy in eV")

    params = commands.add_parser("params", parents=[output], help="Cavity feasibility numbers")
    params.add_argument("--preset", choices=CAVITY_PRESETS)
    params.add_argument("--params-file", help="Cavity parameter document with explicit units")
    params.add_argument("--tau-c", type=_time_argument, help="Cavity photon lifetime, e.g. 17.6ps")
    params.add_argument("--w1", type=float, help="Photon 1 energy in eV")
    params.add_argument("--w2", type=float, help="Photon 2 energy in eV")
    params.add_argument("--delta-e", type=float, help="Two-photon transition energy in eV")
    params.add_argument("--tol", dest="tolerance", type=float, default=1e-3, help="Resonance tolerance in eV")
    params.add_argument("--intermediate", type=float, help="One-photon transition energy in eV")

    qdot = commands.add_parser("qdot", parents=[output], help="Four-pass quantum-dot protocol")
    qdot.add_argument("--eta", type=float, help="Dot absorption efficiency in [0, 1]")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Build a RunConfig from parsed command-line options."""
    def get(name: str, default=None):
        return getattr(args, name, default)

    return RunConfig(
        command=Command(args.command),
        device=get("device"),
        device_file=get("device_file"),
        eta=get("eta"),
        input_label=get("input_label"),
        amplitudes=get("amplitudes"),
        mode=SimulationMode(get("mode", SimulationMode.EXACT.value)),
        trials=get("trials", 10000),
        seed=get("seed"),
        workers=get("workers", 1),
        output_format=OutputFormat(args.format),
        output=get("output"),
        preset=get("preset"),
        params_file=get("params_file"),
        tau_c=get("tau_c"),
        model_file=get("model_file"),
        w1=get("w1"),
        w2=get("w2"),
        delta_e=get("delta_e"),
        tolerance=get("tolerance", 1e-3),
        intermediate=get("intermediate"),
    )


def load_config(path: Path) -> RunConfig:
    """
    Load a RunConfig document.

    Raises:
        ValidationError: If the file is missing or malformed
    """
    if not path.exists():
        raise ValidationError(f"Config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ValidationError(f"Cannot parse config file {path}: {e}")
    return RunConfig.from_dict(data)


# =============================================================================
# Commands
# =============================================================================

def _input_state(config: RunConfig) -> tuple[TwoPhotonState, object]:
    """The input state and how to echo it in the artifact."""
    if config.input_label:
        label = BellLabel.parse(config.input_label)
        return TwoPhotonState.bell(label), label.value
    amplitudes = np.array(config.amplitudes, dtype=complex)
    norm = np.linalg.norm(amplitudes)
    if norm == 0.0:
        raise ValidationError("Input amplitudes are all zero")
    state = TwoPhotonState.pure(amplitudes / norm)
    return state, [[round_number(re), round_number(im)] for re, im in state.to_dict()["amplitudes"]]


def _device(scope: BellScope, config: RunConfig) -> DeviceSpec:
    if config.device_file:
        return scope.devices.load_device(config.device_file, config.eta)
    eta = 1.0 if config.eta is None else config.eta
    return scope.devices.builtin(config.device or "standard", eta)


def cmd_simulate(scope: BellScope, config: RunConfig) -> tuple[dict, tuple[list[str], list[list[str]]]]:
    """Outcome distribution (exact) or counts (Monte Carlo) for one input."""
    device = _device(scope, config)
    state, echo = _input_state(config)
    artifact = {"command": "simulate", "device": device.name, "input": echo, "mode": config.mode.value}

    if config.mode == SimulationMode.MONTECARLO:
        result = scope.devices.propagate_monte_carlo(device, state, config.trials, config.seed, config.workers)
    else:
        result = scope.devices.propagate_exact(device, state)
    artifact.update(result.to_dict())
    return artifact, result.csv_table()


def cmd_confusion(scope: BellScope, config: RunConfig) -> tuple[dict, tuple[list[str], list[list[str]]]]:
    """Confusion matrix of a device."""
    device = _device(scope, config)
    matrix = scope.devices.confusion_matrix(device)
    artifact = {"command": "confusion", "device": device.name}
    if config.eta is not None:
        artifact["eta"] = config.eta
    artifact.update(matrix.to_dict())
    return artifact, matrix.csv_table()


def _load_model(path: str) -> TransitionModel:
    model_path = Path(path)
    if not model_path.exists():
        raise ValidationError(f"Model file not found: {model_path}")
    try:
        data = yaml.safe_load(model_path.read_text())
    except yaml.YAMLError as e:
        raise ValidationError(f"Cannot parse model file {model_path}: {e}")
    if not isinstance(data, dict):
        raise ValidationError(f"Model file {model_path} must hold an object")
    if data.get("schema", 1) != 1:
        raise ValidationError(f"Unsupported model schema: {data.get('schema')}")
    return TransitionModel.from_dict(data)


def cmd_selection(scope: BellScope, config: RunConfig) -> tuple[dict, tuple[list[str], list[list[str]]]]:
    """Geometrical factors, Bell weights and, with a model, rate and absorbed state."""
    state, echo = _input_state(config)
    factors = scope.selection.geometrical_factors(state)
    rows = [
        [mu.value, label, format_number(value.real), format_number(value.imag)]
        for (mu, label), value in factors.items()
    ]
    artifact: dict = {
        "command": "selection",
        "input": echo,
        "factors": [
            {"irrep": mu.value, "row": label, "re": round_number(value.real), "im": round_number(value.imag)}
            for (mu, label), value in factors.items()
        ],
        "allowed_irreps": [mu.value for mu in scope.selection.dominant_irreps(state)],
        "bell_weights": {
            label.value: round_number(weight)
            for label, weight in scope.polarization.bell_decomposition(state).items()
        },
    }

    if config.model_file:
        model = _load_model(config.model_file)
        rate = scope.selection.tpa_relative_rate(state, model, config.w1, config.w2)
        absorbed = scope.selection.absorbed_state(model, config.w1, config.w2)
        artifact["w1"] = config.w1
        artifact["w2"] = config.w2
        artifact["rate"] = round_number(rate)
        artifact["absorbed_state"] = {
            "amplitudes": [[round_number(re), round_number(im)] for re, im in absorbed.to_dict()["amplitudes"]],
            "bell_weights": {
                label.value: round_number(weight)
                for label, weight in scope.polarization.bell_decomposition(absorbed).items()
            },
        }
        rows.append(["rate", "", format_number(rate), "0"])

    return artifact, (["irrep", "row", "re", "im"], rows)


def cmd_params(scope: BellScope, config: RunConfig) -> tuple[dict, tuple[list[str], list[list[str]]]]:
    """Cavity estimate and optional resonance check."""
    if config.params_file:
        params = scope.cavity.load_params(config.params_file)
        if config.tau_c is not None:
            params = params.with_lifetime(config.tau_c)
    else:
        params = scope.cavity.preset(config.preset or "cucl", config.tau_c)

    estimate = {k: round_number(v) for k, v in scope.cavity.estimate(params).items()}
    artifact: dict = {"command": "params", "params": params.to_dict(), "estimate": estimate}
    rows = [[k, format_number(v)] for k, v in estimate.items()]

    if config.delta_e is not None:
        check = ResonanceCheck(
            w1=config.w1,
            w2=config.w2,
            transition_energy=config.delta_e,
            tolerance=config.tolerance,
            intermediate_energy=config.intermediate,
        )
        resonance = scope.cavity.check_resonance(check)
        artifact["resonance"] = resonance.to_dict()
        for key, value in resonance.to_dict().items():
            rows.append([key, str(value).lower() if isinstance(value, bool) else format_number(value)])

    return artifact, (["quantity", "value"], rows)


def cmd_qdot(scope: BellScope, config: RunConfig) -> tuple[dict, tuple[list[str], list[list[str]]]]:
    """Four-pass protocol confusion matrix."""
    eta = 1.0 if config.eta is None else config.eta
    result = scope.qdot.four_pass_protocol(eta)
    artifact = {"command": "qdot", "eta": eta}
    artifact.update(result.to_dict())
    return artifact, result.confusion.csv_table()


COMMANDS = {
    Command.SIMULATE: cmd_simulate,
    Command.CONFUSION: cmd_confusion,
    Command.SELECTION: cmd_selection,
    Command.PARAMS: cmd_params,
    Command.QDOT: cmd_qdot,
}


def run(config: RunConfig, scope: Optional[BellScope] = None) -> int:
    """
    Validate a configuration, run its command and emit the artifact.

    Returns:
        Exit code (see module docstring)
    """
    problems = config.validate()
    if problems:
        for problem in problems:
            print_error(problem)
        return EXIT_INVALID

    scope = scope or BellScope()
    try:
        artifact, (header, rows) = COMMANDS[config.command](scope, config)
        if config.output_format == OutputFormat.CSV:
            text = to_csv_text(header, rows)
        else:
            text = to_json_text(artifact)
        write_artifact(text, Path(config.output) if config.output else None)
    except PhysicsDomainError as e:
        print_error(str(e))
        return EXIT_PHYSICS
    except ValueError as e:
        print_error(str(e))
        return EXIT_INVALID
    except OSError as e:
        log_error(f"Cannot write output: {e}")
        print_error(str(e))
        return EXIT_FAILURE
    return EXIT_OK


def main(args: Optional[list[str]] = None) -> int:
    """Main CLI entry point."""
    if args is None:
        args = sys.argv[1:]

    parser = build_parser()
    try:
        namespace = parser.parse_args(args)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(
        level=logging.DEBUG if namespace.verbose else logging.WARNING,
        log_file=namespace.log_file,
    )

    if namespace.config and namespace.command:
        print_error("Use either --config or a command, not both")
        return EXIT_INVALID
    if not namespace.config and not namespace.command:
        parser.print_help()
        return EXIT_INVALID

    try:
        config = load_config(namespace.config) if namespace.config else config_from_args(namespace)
    except ValueError as e:
        print_error(str(e))
        return EXIT_INVALID

    return run(config)


if __name__ == "__main__":
    sys.exit(main())
