"""One-time pad with an imperfect key, and the attacks against it.

Eve always plays the maximum a posteriori strategy: with no known plaintext
she guesses the single most likely key; with the first ``m`` plaintext bits
known she reads off the first ``m`` key bits from the ciphertext and guesses
the most likely suffix under that prefix. Ties go to the smallest integer
encoding, as in :mod:`imperfect_key.distributions`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    BitString,
    KeyDistribution,
    PrefixLeakProfile,
    guessing_probability,
    prefix_leak_profile,
)

# Trials are grouped into fixed blocks; block b draws from its own stream
# keyed by (seed, b), so trial t's randomness depends only on (seed, t).
TRIAL_BLOCK = 4096
CONSISTENCY_SIGMAS = 4.0


def otp_encrypt(plaintext: BitString, key: BitString) -> BitString:
    if plaintext.length != key.length:
        raise ValueError(f"plaintext length {plaintext.length} != key length {key.length}")
    return plaintext ^ key


otp_decrypt = otp_encrypt


def ciphertext_only_success(p: KeyDistribution) -> float:
    return guessing_probability(p)[0]


def known_plaintext_success(p: KeyDistribution, m: int) -> float:
    return prefix_leak_profile(p, m).average_compromise_probability


@dataclass(frozen=True)
class AttackScenario:
    """Eve's setting: key distribution, known plaintext prefix length, plaintext.

    ``known_prefix_length == 0`` is the ciphertext-only attack.
    """

    key_distribution: KeyDistribution
    known_prefix_length: int = 0
    plaintext: BitString | None = None

    def __post_init__(self):
        n = self.key_distribution.n
        if not 0 <= self.known_prefix_length < n:
            raise ValueError(f"known_prefix_length must be in [0, {n}), got {self.known_prefix_length}")
        if self.plaintext is None:
            object.__setattr__(self, "plaintext", BitString.zeros(n))
        elif self.plaintext.length != n:
            raise ValueError(f"plaintext length {self.plaintext.length} != key length {n}")

    @property
    def n(self) -> int:
        return self.key_distribution.n

    def analytic_success(self) -> float:
        if self.known_prefix_length == 0:
            return ciphertext_only_success(self.key_distribution)
        return known_plaintext_success(self.key_distribution, self.known_prefix_length)


@dataclass(frozen=True)
class AttackReport:
    analytic_success: float
    empirical_success: float
    trials: int
    seed: int
    standard_error: float
    successes: int
    per_prefix: PrefixLeakProfile | None = field(default=None, repr=False)
    # counts of trials by number of key bits Eve guessed correctly (0..n)
    bit_agreement_histogram: tuple[int, ...] = field(default=(), repr=False)

    @property
    def deviation(self) -> float:
        return abs(self.empirical_success - self.analytic_success)

    @property
    def consistent(self) -> bool:
        """Whether the empirical rate is within 4 standard errors of the analytic one."""
        return self.deviation <= CONSISTENCY_SIGMAS * self.standard_error


def trial_uniforms(seed: int, start: int, stop: int) -> np.ndarray:
    """Uniform [0, 1) draws for trials ``start .. stop-1`` of a run seeded by ``seed``."""
    out = np.empty(max(stop - start, 0))
    if stop <= start:
        return out
    pos = 0
    for block in range(start // TRIAL_BLOCK, (stop - 1) // TRIAL_BLOCK + 1):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
        draws = rng.random(TRIAL_BLOCK)
        lo = max(start, block * TRIAL_BLOCK) - block * TRIAL_BLOCK
        hi = min(stop, (block + 1) * TRIAL_BLOCK) - block * TRIAL_BLOCK
        out[pos : pos + hi - lo] = draws[lo:hi]
        pos += hi - lo
    return out


def sample_keys(p: KeyDistribution, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF key sampling; never returns a zero-probability key."""
    cdf = np.cumsum(p.probs)
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    last = int(np.flatnonzero(p.probs)[-1])
    return np.minimum(idx, last).astype(np.uint64)


def _eve_guess_table(scenario: AttackScenario) -> tuple[np.ndarray, PrefixLeakProfile | None]:
    m = scenario.known_prefix_length
    p = scenario.key_distribution
    if m == 0:
        return np.array([guessing_probability(p)[1].to_int()], dtype=np.uint64), None
    profile = prefix_leak_profile(p, m)
    return profile.argmax_suffixes.astype(np.uint64), profile


def _run_trials(scenario, guess_table, seed, start, stop):
    n, m = scenario.n, scenario.known_prefix_length
    shift = np.uint64(n - m)
    x = np.uint64(scenario.plaintext.to_int())
    keys = sample_keys(scenario.key_distribution, trial_uniforms(seed, start, stop))
    ciphertext = keys ^ x
    if m == 0:
        guesses = np.full_like(keys, guess_table[0])
    else:
        # key prefix = ciphertext prefix XOR known plaintext prefix
        prefix = (ciphertext ^ x) >> shift
        guesses = (prefix << shift) | guess_table[prefix]
    recovered_plaintext = ciphertext ^ guesses
    hits = int(np.count_nonzero(recovered_plaintext == x))
    agreement = n - np.bitwise_count(guesses ^ keys).astype(np.int64)
    return hits, np.bincount(agreement, minlength=n + 1)


def simulate_attack(
    scenario: AttackScenario, trials: int, seed: int, workers: int = 1
) -> AttackReport:
    """Monte Carlo estimate of Eve's full-plaintext recovery rate.

    Each trial samples a key, encrypts the scenario plaintext and lets Eve
    attack the ciphertext. The report is identical for any ``workers``.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    guess_table, profile = _eve_guess_table(scenario)
    bounds = [(s, min(s + TRIAL_BLOCK, trials)) for s in range(0, trials, TRIAL_BLOCK)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _run_trials(scenario, guess_table, seed, *b), bounds))
    else:
        parts = [_run_trials(scenario, guess_table, seed, *b) for b in bounds]
    hits = sum(h for h, _ in parts)
    histogram = np.sum([hist for _, hist in parts], axis=0)
    rate = hits / trials
    return AttackReport(
        analytic_success=scenario.analytic_success(),
        empirical_success=rate,
        trials=trials,
        seed=seed,
        standard_error=math.sqrt(rate * (1.0 - rate) / trials),
        successes=hits,
        per_prefix=profile,
        bit_agreement_histogram=tuple(int(c) for c in histogram),
    )


def counterexample_known_plaintext_success(n: int, m: int) -> float:
    """Closed form of Eve's success against the counter-example key with ``m`` known bits."""
    return 2.0**-m + (1.0 - 2.0**-m) * 2.0 ** -(n - m)


__all__ = [
    "AttackReport",
    "AttackScenario",
    "ciphertext_only_success",
    "counterexample_known_plaintext_success",
    "known_plaintext_success",
    "otp_decrypt",
    "otp_encrypt",
    "sample_keys",
    "simulate_attack",
    "trial_uniforms",
]
