"""Toy privacy amplification by Toeplitz hashing over GF(2).

Side-information model: Eve knows the exact values of ``t`` raw-key bit
positions and nothing else, so the unknown raw bits are uniform. The final
key ``M @ raw`` is then uniform over a coset of the column space of ``M``
restricted to the unknown positions, and its distance from uniform depends on
the code only through the rank ``r`` of that restriction:
``delta = 1 - 2**(r - k_out)``.

Bit strings and integer encodings follow :mod:`imperfect_key.distributions`
(bit 0 is the most significant).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .distributions import BitString, KeyDistribution, statistical_distance, uniform
from .guarantee import MarkovCheck, verify_markov

MAX_RAW = 24
ENUMERATION_CHUNK = 1 << 14


def _check_dims(k_out: int, k_raw: int) -> None:
    if not 1 <= k_out <= k_raw <= MAX_RAW:
        raise ValueError(f"need 1 <= k_out <= k_raw <= {MAX_RAW}, got k_out={k_out}, k_raw={k_raw}")


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """``k_out x k_raw`` matrix over GF(2)."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError("entries must be a 2-D array")
        _check_dims(*a.shape)
        if np.any(a > 1):
            raise ValueError("entries must be 0 or 1")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def k_out(self) -> int:
        return self.entries.shape[0]

    @property
    def k_raw(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, k_out: int, k_raw: int) -> "BinaryMatrix":
        return cls(np.zeros((k_out, k_raw), dtype=np.uint8))

    def column_ints(self, columns: Sequence[int] | None = None) -> list[int]:
        """Columns as ``k_out``-bit integers (row 0 is the most significant bit)."""
        cols = range(self.k_raw) if columns is None else columns
        weights = 1 << np.arange(self.k_out - 1, -1, -1, dtype=np.int64)
        return [int(np.dot(self.entries[:, j].astype(np.int64), weights)) for j in cols]


def sample_toeplitz_code(k_out: int, k_raw: int, rng_seed: int) -> BinaryMatrix:
    """Toeplitz matrix built from ``k_out + k_raw - 1`` seeded random bits.

    ``entry(i, j)`` depends only on ``i - j``.
    """
    _check_dims(k_out, k_raw)
    diag_bits = np.random.default_rng(rng_seed).integers(0, 2, size=k_out + k_raw - 1, dtype=np.uint8)
    i = np.arange(k_out)[:, None]
    j = np.arange(k_raw)[None, :]
    return BinaryMatrix(diag_bits[i - j + k_raw - 1])


def apply_code(matrix: BinaryMatrix, raw: BitString) -> BitString:
    if raw.length != matrix.k_raw:
        raise ValueError(f"raw key has {raw.length} bits, code expects {matrix.k_raw}")
    bits = (matrix.entries.astype(np.int64) @ np.array(raw.bits, dtype=np.int64)) % 2
    return BitString(tuple(int(b) for b in bits))


def _gf2_span_basis(vectors: Iterable[int]) -> list[int]:
    # sorted descending; leading bits stay distinct
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of integers viewed as bit vectors."""
    return len(_gf2_span_basis(vectors))


@dataclass(frozen=True)
class SideInformation:
    """Raw-key bits Eve knows exactly: sorted positions and their values."""

    known_positions: tuple[int, ...] = ()
    known_values: tuple[int, ...] = ()

    def __post_init__(self):
        pos = tuple(int(p) for p in self.known_positions)
        vals = tuple(int(v) for v in self.known_values)
        if len(pos) != len(vals):
            raise ValueError("known_positions and known_values differ in length")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("known_positions must be strictly increasing")
        if pos and pos[0] < 0:
            raise ValueError("known_positions must be non-negative")
        if any(v not in (0, 1) for v in vals):
            raise ValueError("known_values must be bits")
        object.__setattr__(self, "known_positions", pos)
        object.__setattr__(self, "known_values", vals)

    @property
    def t(self) -> int:
        return len(self.known_positions)

    def check(self, k_raw: int) -> None:
        if self.t > k_raw or (self.known_positions and self.known_positions[-1] >= k_raw):
            raise ValueError(f"side information does not fit a {k_raw}-bit raw key")

    def unknown_positions(self, k_raw: int) -> list[int]:
        known = set(self.known_positions)
        return [j for j in range(k_raw) if j not in known]

    def with_known(self, position: int, value: int) -> "SideInformation":
        if position in self.known_positions:
            raise ValueError(f"position {position} already known")
        pairs = sorted(zip(self.known_positions + (position,), self.known_values + (value,)))
        return SideInformation(tuple(p for p, _ in pairs), tuple(v for _, v in pairs))

    @classmethod
    def random(cls, k_raw: int, t: int, rng: np.random.Generator) -> "SideInformation":
        if not 0 <= t <= k_raw:
            raise ValueError(f"t={t} outside [0, {k_raw}]")
        pos = np.sort(rng.choice(k_raw, size=t, replace=False))
        vals = rng.integers(0, 2, size=t)
        return cls(tuple(int(p) for p in pos), tuple(int(v) for v in vals))


def _known_offset(matrix: BinaryMatrix, side: SideInformation) -> int:
    offset = 0
    for col, v in zip(matrix.column_ints(side.known_positions), side.known_values):
        if v:
            offset ^= col
    return offset


def residual_rank(matrix: BinaryMatrix, side: SideInformation) -> int:
    """GF(2) rank of the code restricted to the raw bits Eve does not know."""
    side.check(matrix.k_raw)
    return gf2_rank(matrix.column_ints(side.unknown_positions(matrix.k_raw)))


def final_key_distribution_rank(matrix: BinaryMatrix, side: SideInformation) -> KeyDistribution:
    """Eve's final-key distribution as a uniform coset of the residual column space."""
    side.check(matrix.k_raw)
    basis = _gf2_span_basis(matrix.column_ints(side.unknown_positions(matrix.k_raw)))
    span = np.zeros(1, dtype=np.int64)
    for b in basis:
        span = np.concatenate([span, span ^ b])
    probs = np.zeros(1 << matrix.k_out)
    probs[span ^ _known_offset(matrix, side)] = 2.0 ** -len(basis)
    return KeyDistribution(matrix.k_out, probs)


def final_key_distribution_enumerate(matrix: BinaryMatrix, side: SideInformation) -> KeyDistribution:
    """Eve's final-key distribution by hashing every consistent raw key."""
    side.check(matrix.k_raw)
    k_raw, k_out = matrix.k_raw, matrix.k_out
    unknown = np.array(side.unknown_positions(k_raw), dtype=np.int64)
    u = unknown.size
    total = 1 << u
    weights = 1 << np.arange(k_out - 1, -1, -1, dtype=np.int64)
    m_t = matrix.entries.T.astype(np.int64)
    counts = np.zeros(1 << k_out, dtype=np.int64)
    for start in range(0, total, ENUMERATION_CHUNK):
        idx = np.arange(start, min(start + ENUMERATION_CHUNK, total), dtype=np.int64)
        raw = np.zeros((idx.size, k_raw), dtype=np.int64)
        raw[:, list(side.known_positions)] = side.known_values
        if u:
            raw[:, unknown] = (idx[:, None] >> np.arange(u - 1, -1, -1)) & 1
        out_bits = (raw @ m_t) % 2
        counts += np.bincount(out_bits @ weights, minlength=1 << k_out)
    return KeyDistribution(k_out, counts / total)


def eve_final_key_distribution(
    matrix: BinaryMatrix, side: SideInformation, method: str = "rank"
) -> KeyDistribution:
    """Distribution of ``apply_code(matrix, R)`` for ``R`` uniform given ``side``.

    ``method`` is ``"rank"`` (coset construction) or ``"enumerate"``
    (brute force over all ``2**(k_raw - t)`` completions); both are exact.
    """
    if method == "rank":
        return final_key_distribution_rank(matrix, side)
    if method == "enumerate":
        return final_key_distribution_enumerate(matrix, side)
    raise ValueError(f"unknown method {method!r}")


def delta_for_rank(rank: int, k_out: int) -> float:
    return 1.0 - 2.0 ** (rank - k_out)


def code_delta(matrix: BinaryMatrix, side: SideInformation) -> float:
    """Statistical distance of Eve's final-key distribution from uniform."""
    return statistical_distance(eve_final_key_distribution(matrix, side), uniform(matrix.k_out))


@dataclass(frozen=True, eq=False)
class CodeFamilyScan:
    codes_sampled: int
    ranks: np.ndarray = field(repr=False)
    delta_values: np.ndarray = field(repr=False)
    mean_delta: float
    quantiles: dict[int, float]
    markov_check: tuple[MarkovCheck, ...]

    @property
    def markov_holds(self) -> bool:
        return all(c.holds for c in self.markov_check)


def code_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th code of a family scan."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def scan_codes(codes: Sequence[BinaryMatrix], side: SideInformation, workers: int = 1) -> CodeFamilyScan:
    """Aggregate per-code distances over an explicit list of codes."""
    if not codes:
        raise ValueError("need at least one code")

    def one(code):
        delta = code_delta(code, side)
        return residual_rank(code, side), delta

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, codes))
    else:
        results = [one(c) for c in codes]
    ranks = np.array([r for r, _ in results], dtype=np.int64)
    deltas = np.array([d for _, d in results])
    mean = float(deltas.mean())
    quantiles = {q: float(np.quantile(deltas, q / 100)) for q in (50, 90, 99)}
    # thresholds collapse to zero when every code is perfect; nothing to check then
    thresholds = [mean**0.5, 2 * mean, 10 * mean] if mean > 0 else []
    checks = tuple(verify_markov(deltas, tau) for tau in thresholds)
    for arr in (ranks, deltas):
        arr.setflags(write=False)
    return CodeFamilyScan(len(codes), ranks, deltas, mean, quantiles, checks)


def scan_code_family(
    k_out: int, k_raw: int, side: SideInformation, codes: int, seed: int, workers: int = 1
) -> CodeFamilyScan:
    """Sample ``codes`` Toeplitz codes and summarize the spread of Eve's distance.

    Code ``i`` is seeded by ``code_seed(seed, i)``, so the result does not
    depend on ``workers``.
    """
    _check_dims(k_out, k_raw)
    side.check(k_raw)
    if codes < 1:
        raise ValueError(f"codes must be >= 1, got {codes}")
    family = [sample_toeplitz_code(k_out, k_raw, code_seed(seed, i)) for i in range(codes)]
    return scan_codes(family, side, workers=workers)


__all__ = [
    "MAX_RAW",
    "BinaryMatrix",
    "CodeFamilyScan",
    "SideInformation",
    "apply_code",
    "code_delta",
    "code_seed",
    "delta_for_rank",
    "eve_final_key_distribution",
    "final_key_distribution_enumerate",
    "final_key_distribution_rank",
    "gf2_rank",
    "residual_rank",
    "sample_toeplitz_code",
    "scan_code_family",
    "scan_codes",
]
