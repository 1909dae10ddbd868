"""
Utility functions for Bellscope.

Provides shared utilities for logging, number formatting, artifact
emission, and the Monte Carlo seed fallback.
"""

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Optional

# Configure module logger
logger = logging.getLogger("bellscope")

SCHEMA_VERSION = 1
SEED_ENV_VAR = "BELLSCOPE_SEED"
SIGNIFICANT_DIGITS = 12
PROBABILITY_FLOOR = 1e-15


def log_operation(operation: str, details: str) -> None:
    """
    Log an operation at debug level.

    Args:
        operation: Operation name (e.g., "PROPAGATE", "CG_TABLE")
        details: Details about the operation
    """
    logger.debug(f"{operation}: {details}")


def log_error(message: str) -> None:
    """Log an error message."""
    logger.error(message)


def log_info(message: str) -> None:
    """Log an info message."""
    logger.info(message)


def format_number(value: float) -> str:
    """Format a real number with the fixed number of significant digits."""
    text = f"{float(value):.{SIGNIFICANT_DIGITS}g}"
    # Avoid "-0" in golden files
    if text in ("-0", "-0.0"):
        return "0"
    return text


def round_number(value: float) -> float:
    """Round a real number so JSON and CSV print the same digits."""
    return float(format_number(value))


def format_probability(value: float) -> str:
    """Format a probability, printing round-off residue as 0."""
    return format_number(0.0 if abs(value) < PROBABILITY_FLOOR else value)


def round_probability(value: float) -> float:
    """Round a probability the way format_probability prints it."""
    return float(format_probability(value))


def resolve_seed(seed: Optional[int]) -> int:
    """
    Resolve the Monte Carlo seed.

    Explicit seed wins, then the BELLSCOPE_SEED environment variable,
    then 0.

    Raises:
        ValueError: If the environment variable is not a non-negative integer
    """
    if seed is not None:
        return seed

    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value is not None and env_value.strip():
        try:
            resolved = int(env_value)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env_value!r}")
        if resolved < 0:
            raise ValueError(f"{SEED_ENV_VAR} must be non-negative, got {resolved}")
        return resolved

    logger.warning(f"No seed given and {SEED_ENV_VAR} unset; using seed 0")
    return 0


def to_json_text(artifact: dict) -> str:
    """Serialize an artifact dict, stamping the schema version."""
    data = {"schema": SCHEMA_VERSION}
    data.update(artifact)
    return json.dumps(data, indent=2) + "\n"


def to_csv_text(header: list[str], rows: list[list[str]]) -> str:
    """Render a header and rows as CSV text with Unix line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_artifact(text: str, output: Optional[Path] = None) -> None:
    """Write an emitted artifact to a file, or stdout when no path is given."""
    if output is None:
        print(text, end="")
        return

    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text)
    log_operation("ARTIFACT_WRITTEN", str(output))


def configure_logging(
        level: int = logging.INFO,
        log_file: Optional[Path] = None
) -> None:
    """
    Configure Bellscope logging.

    Args:
        level: Logging level (default INFO)
        log_file: Optional file to write logs to
    """
    handlers: list[logging.Handler] = [logging.StreamHandler()]

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )
