"""Shared result record for sampling-based verification sweeps."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class VerificationReport:
    """Outcome of a randomized inequality check.

    samples       how many random instances were tested
    violations    how many breached the check's tolerance (the exact rule is
                  documented by each check: the Gaussian sweeps flag
                  ratio > 1 + 1e-9, the inf-decomposition check flags an
                  objective below the claimed infimum by more than 1e-10)
    worst_ratio   largest observed ratio of claimed bound to sampled value;
                  anything at or below 1 means the claim held with room
    equality_gap  |1 - ratio| at a supplied extremizer, when one was tested
    seed          RNG seed the sweep was run with
    """

    samples: int
    violations: int
    worst_ratio: float
    equality_gap: float | None = None
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        doc = {
            "samples": self.samples,
            "violations": self.violations,
            "worst_ratio": self.worst_ratio,
        }
        if self.equality_gap is not None:
            doc["equality_gap"] = self.equality_gap
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc
