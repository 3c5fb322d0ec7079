"""Converting average distance guarantees into per-trial probability guarantees.

Each averaging layer hidden inside a stated level ``d`` (choice of privacy
amplification code, Eve's measurement outcome, the known key bits) costs one
application of Markov's inequality, so ``k`` layers leave an individual
guarantee of only ``d ** (1 / (k + 1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_LAYERS = 8
MARKOV_TOL = 1e-12

# Named layer counts.
INDIVIDUAL = 1  # average over privacy-amplification codes only
CIPHERTEXT_ONLY = 2  # plus Eve's measurement results
KNOWN_PLAINTEXT = 3  # plus the known key bits

ATTACK_PRESETS = {
    "individual": INDIVIDUAL,
    "ciphertext-only": CIPHERTEXT_ONLY,
    "known-plaintext": KNOWN_PLAINTEXT,
}

LEVEL_PRESETS = {
    "theory": 1e-14,
    "experiment": 1e-9,
}

# log10 of the effective level quoted for each (level, attack) preset.
# The experiment/known-plaintext figure is a rounded -2.5; the exact value is -2.25.
REFERENCE_LOG10 = {
    ("theory", "ciphertext-only"): -5.0,
    ("experiment", "ciphertext-only"): -3.0,
    ("theory", "known-plaintext"): -4.0,
    ("experiment", "known-plaintext"): -2.5,
}


@dataclass(frozen=True)
class GuaranteeLevel:
    """An average distance level ``d`` hiding ``layers`` averaging layers."""

    d: float
    layers: int = 0

    def __post_init__(self):
        if not (0.0 < self.d <= 1.0):
            raise ValueError(f"d must lie in (0, 1], got {self.d!r}")
        if not 0 <= self.layers <= MAX_LAYERS:
            raise ValueError(f"layers must be in [0, {MAX_LAYERS}], got {self.layers}")

    @property
    def effective(self) -> float:
        return effective_level(self)

    @classmethod
    def preset(cls, level: str, attack: str) -> "GuaranteeLevel":
        return cls(LEVEL_PRESETS[level], ATTACK_PRESETS[attack])


def effective_level(g: GuaranteeLevel) -> float:
    """Individual per-trial level ``d ** (1 / (layers + 1))``."""
    if g.layers == 0:
        return g.d
    return g.d ** (1.0 / (g.layers + 1))


def required_d(target_effective: float, layers: int) -> float:
    """Average level needed so that ``layers`` Markov steps still reach ``target_effective``."""
    if not (0.0 < target_effective <= 1.0):
        raise ValueError(f"target must lie in (0, 1], got {target_effective!r}")
    if not 0 <= layers <= MAX_LAYERS:
        raise ValueError(f"layers must be in [0, {MAX_LAYERS}], got {layers}")
    return target_effective ** (layers + 1)


def rounds_budget(per_trial_prob: float, rounds: int) -> float:
    """Union bound on failure over ``rounds`` independent uses."""
    if not (0.0 < per_trial_prob <= 1.0):
        raise ValueError(f"per-trial probability must lie in (0, 1], got {per_trial_prob!r}")
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    return min(1.0, rounds * per_trial_prob)


@dataclass(frozen=True)
class TwoPointWitness:
    """Random variable equal to ``value`` with probability ``probability``, else 0."""

    value: float
    probability: float

    @property
    def mean(self) -> float:
        return self.value * self.probability

    def tail_probability(self, threshold: float) -> float:
        return self.probability if self.value >= threshold else 0.0

    def markov_bound(self, threshold: float) -> float:
        return self.mean / threshold

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return np.where(rng.random(size) < self.probability, self.value, 0.0)


def markov_tightness_witness(d: float) -> TwoPointWitness:
    """Mean-``d`` variable whose tail at ``sqrt(d)`` equals the Markov bound.

    Shows that an average guarantee ``d`` supports no individual guarantee
    better than ``sqrt(d)``.
    """
    if not (0.0 < d <= 1.0):
        raise ValueError(f"d must lie in (0, 1], got {d!r}")
    root = math.sqrt(d)
    return TwoPointWitness(value=root, probability=root)


@dataclass(frozen=True)
class MarkovCheck:
    threshold: float
    mean: float
    fraction_exceeding: float
    bound: float
    holds: bool


def verify_markov(samples: Sequence[float] | np.ndarray, threshold: float) -> MarkovCheck:
    """Empirical check of ``P(Z >= threshold) <= E[Z] / threshold``."""
    z = np.asarray(samples, dtype=np.float64)
    if z.size == 0:
        raise ValueError("samples must be non-empty")
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold!r}")
    if np.any(z < 0):
        raise ValueError("samples must be non-negative")
    mean = float(z.mean())
    fraction = float(np.count_nonzero(z >= threshold)) / z.size
    bound = mean / threshold
    return MarkovCheck(threshold, mean, fraction, bound, fraction <= bound + MARKOV_TOL)


__all__ = [
    "ATTACK_PRESETS",
    "CIPHERTEXT_ONLY",
    "INDIVIDUAL",
    "KNOWN_PLAINTEXT",
    "LEVEL_PRESETS",
    "REFERENCE_LOG10",
    "GuaranteeLevel",
    "MarkovCheck",
    "TwoPointWitness",
    "effective_level",
    "markov_tightness_witness",
    "required_d",
    "rounds_budget",
    "verify_markov",
]
