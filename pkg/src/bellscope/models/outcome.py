"""
Outcome models for device propagation.

OutcomeDistribution holds exact probabilities per outcome label;
MonteCarloResult holds sampled counts for a fixed seed.
"""

from dataclasses import dataclass, field

from bellscope.utils import format_probability, round_probability


@dataclass
class OutcomeDistribution:
    """Exact outcome probabilities, keyed by detector id string or "no-click"."""
    probabilities: dict[str, float] = field(default_factory=dict)

    def probability(self, outcome: str) -> float:
        """Probability of one outcome (0 if the outcome is unknown)."""
        return self.probabilities.get(str(outcome), 0.0)

    def total(self) -> float:
        """Sum of all outcome probabilities."""
        return float(sum(self.probabilities.values()))

    def outcomes(self) -> list[str]:
        return list(self.probabilities)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "outcomes": self.outcomes(),
            "probabilities": {k: round_probability(v) for k, v in self.probabilities.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OutcomeDistribution":
        """Create OutcomeDistribution from dictionary."""
        return cls(probabilities={k: float(v) for k, v in data["probabilities"].items()})

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        """Header and rows for CSV emission."""
        rows = [[k, format_probability(v)] for k, v in self.probabilities.items()]
        return ["outcome", "probability"], rows


@dataclass
class MonteCarloResult:
    """Sampled outcome counts."""
    counts: dict[str, int]
    trials: int
    seed: int

    def frequency(self, outcome: str) -> float:
        """Empirical frequency of one outcome."""
        return self.counts.get(str(outcome), 0) / self.trials

    def frequencies(self) -> dict[str, float]:
        return {k: v / self.trials for k, v in self.counts.items()}

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "trials": self.trials,
            "seed": self.seed,
            "outcomes": list(self.counts),
            "counts": dict(self.counts),
            "frequencies": {k: round_probability(v) for k, v in self.frequencies().items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MonteCarloResult":
        """Create MonteCarloResult from dictionary."""
        return cls(
            counts={k: int(v) for k, v in data["counts"].items()},
            trials=int(data["trials"]),
            seed=int(data["seed"]),
        )

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        """Header and rows for CSV emission."""
        rows = [
            [k, str(v), format_probability(v / self.trials)]
            for k, v in self.counts.items()
        ]
        return ["outcome", "count", "frequency"], rows
