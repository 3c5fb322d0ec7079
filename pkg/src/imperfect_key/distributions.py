"""Exact probability distributions over fixed-length bit strings.

Distributions are stored densely: a vector of ``2**n`` probabilities indexed
by the integer encoding of the key, with bit 0 of a :class:`BitString` being
the most significant bit. "The first m bits" of a key are therefore its
``m`` most significant bits and every prefix owns a contiguous block of the
vector, which keeps prefix conditioning a reshape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_N = 20
MAX_BITSTRING_LENGTH = 64
NORMALIZATION_TOL = 1e-12


class SizeError(ValueError):
    """Requested key length exceeds the dense-representation cap."""


class ZeroMassError(ValueError):
    """Conditioning event has probability zero."""


@dataclass(frozen=True)
class BitString:
    """Immutable bit sequence; ``bits[0]`` is the most significant bit."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not 1 <= len(bits) <= MAX_BITSTRING_LENGTH:
            raise ValueError(
                f"BitString length must be in [1, {MAX_BITSTRING_LENGTH}], got {len(bits)}"
            )
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        if not 1 <= length <= MAX_BITSTRING_LENGTH:
            raise ValueError(
                f"BitString length must be in [1, {MAX_BITSTRING_LENGTH}], got {length}"
            )
        value = int(value)
        if not 0 <= value < (1 << length):
            raise ValueError(f"value {value} does not fit in {length} bits")
        return cls(tuple((value >> (length - 1 - i)) & 1 for i in range(length)))

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        """Parse a string of ``0``/``1`` characters, e.g. ``"0101"``."""
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls.from_int(0, length)

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitString(self.bits[index])
        return self.bits[index]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __int__(self) -> int:
        return self.to_int()

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def hex(self) -> str:
        """Zero-padded hexadecimal of the integer encoding."""
        width = (self.length + 3) // 4
        return format(self.to_int(), f"0{width}x")

    def __xor__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitString(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def concat(self, other: "BitString") -> "BitString":
        return BitString(self.bits + other.bits)

    def popcount(self) -> int:
        return sum(self.bits)


def _check_n(n: int) -> int:
    n = int(n)
    if not 1 <= n <= MAX_N:
        raise SizeError(
            f"key length n={n} outside [1, {MAX_N}]: distributions are stored densely "
            f"as 2**n float64 entries ({(1 << MAX_N) * 8 // 2**20} MiB at the cap)"
        )
    return n


@dataclass(frozen=True, eq=False)
class KeyDistribution:
    """Probability vector over all ``2**n`` keys of ``n`` bits.

    The vector is copied on construction and made read-only.
    """

    n: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = _check_n(self.n)
        probs = np.array(self.probs, dtype=np.float64)
        if probs.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} probabilities for n={n}, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise ValueError("probabilities must be finite and non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {NORMALIZATION_TOL}")
        probs.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", probs)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __getitem__(self, key) -> float:
        if isinstance(key, BitString):
            if key.length != self.n:
                raise ValueError(f"key length {key.length} != n={self.n}")
            key = key.to_int()
        return float(self.probs[key])

    def __eq__(self, other) -> bool:
        if not isinstance(other, KeyDistribution):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.probs, other.probs))

    def __hash__(self):
        return hash((self.n, self.probs.tobytes()))

    def allclose(self, other: "KeyDistribution", atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.allclose(self.probs, other.probs, rtol=0, atol=atol))

    def is_uniform(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.probs - 2.0**-self.n) <= atol))

    def items(self) -> Iterator[tuple[int, float]]:
        """Yield ``(index, probability)`` pairs in index order."""
        for i, p in enumerate(self.probs):
            yield i, float(p)


def uniform(n: int) -> KeyDistribution:
    n = _check_n(n)
    return KeyDistribution(n, np.full(1 << n, 2.0**-n))


def point_mass(key: BitString) -> KeyDistribution:
    n = _check_n(key.length)
    probs = np.zeros(1 << n)
    probs[key.to_int()] = 1.0
    return KeyDistribution(n, probs)


def from_probabilities(probs: Sequence[float] | np.ndarray) -> KeyDistribution:
    """Wrap a raw probability vector whose length is a power of two."""
    probs = np.asarray(probs, dtype=np.float64)
    size = probs.shape[0] if probs.ndim == 1 else 0
    if size < 2 or size & (size - 1):
        raise ValueError(f"vector length {size} is not a power of two >= 2")
    return KeyDistribution(size.bit_length() - 1, probs)


def random_distribution(n: int, rng: np.random.Generator, concentration: float = 1.0) -> KeyDistribution:
    """Draw a distribution from a symmetric Dirichlet prior."""
    n = _check_n(n)
    probs = rng.dirichlet(np.full(1 << n, concentration))
    return KeyDistribution(n, probs / probs.sum())


def _check_prefix(n: int, m: int) -> None:
    if not 1 <= m < n:
        raise ValueError(f"prefix length m={m} must satisfy 1 <= m < n={n}")


def counterexample_distribution(
    n: int,
    m: int,
    target_prefix: BitString | None = None,
    designated_suffix: BitString | None = None,
) -> KeyDistribution:
    """Key distribution in which one ``m``-bit prefix pins down the whole key.

    The key ``target_prefix || designated_suffix`` takes the entire mass
    ``2**-m`` of its prefix block; the other suffixes under that prefix get
    probability zero and every key with a different prefix stays at the
    uniform level ``2**-n``. Prefix and suffix default to all zeros.

    Its statistical distance from uniform is exactly ``2**-m - 2**-n``.
    """
    n = _check_n(n)
    _check_prefix(n, m)
    if target_prefix is None:
        target_prefix = BitString.zeros(m)
    if designated_suffix is None:
        designated_suffix = BitString.zeros(n - m)
    if target_prefix.length != m:
        raise ValueError(f"target_prefix has length {target_prefix.length}, expected m={m}")
    if designated_suffix.length != n - m:
        raise ValueError(
            f"designated_suffix has length {designated_suffix.length}, expected n-m={n - m}"
        )
    shift = n - m
    start = target_prefix.to_int() << shift
    probs = np.full(1 << n, 2.0**-n)
    probs[start : start + (1 << shift)] = 0.0
    probs[start + designated_suffix.to_int()] = 2.0**-m
    return KeyDistribution(n, probs)


def statistical_distance(p: KeyDistribution, q: KeyDistribution) -> float:
    """Total variation distance ``0.5 * sum_i |p_i - q_i|``."""
    if p.n != q.n:
        raise ValueError(f"distributions over different key lengths: {p.n} vs {q.n}")
    d = 0.5 * float(np.abs(p.probs - q.probs).sum())
    return min(max(d, 0.0), 1.0)


def guessing_probability(p: KeyDistribution) -> tuple[float, BitString]:
    """Optimal single-guess success probability and the guessed key.

    Ties go to the smallest integer encoding.
    """
    idx = int(np.argmax(p.probs))
    return float(p.probs[idx]), BitString.from_int(idx, p.n)


def conditional_on_prefix(p: KeyDistribution, prefix: BitString) -> tuple[float, KeyDistribution]:
    """Condition ``p`` on its first ``len(prefix)`` bits.

    Returns the prefix probability and the distribution of the remaining
    ``n - m`` bits. Raises :class:`ZeroMassError` if the prefix is impossible.
    """
    m = prefix.length
    _check_prefix(p.n, m)
    shift = p.n - m
    start = prefix.to_int() << shift
    block = p.probs[start : start + (1 << shift)]
    mass = float(block.sum())
    if mass <= 0.0:
        raise ZeroMassError(f"prefix {prefix} has probability zero")
    return mass, KeyDistribution(shift, block / mass)


@dataclass(frozen=True)
class PrefixLeakRow:
    prefix: BitString
    prefix_probability: float
    max_conditional_suffix_probability: float
    argmax_suffix: BitString
    zero_mass: bool


@dataclass(frozen=True, eq=False)
class PrefixLeakProfile:
    """Per-prefix view of how much an ``m``-bit key prefix reveals.

    Stored column-wise; :attr:`rows` materializes one :class:`PrefixLeakRow`
    per prefix in index order, zero-mass prefixes included and flagged.
    """

    n: int
    m: int
    prefix_probabilities: np.ndarray = field(repr=False)
    max_conditional: np.ndarray = field(repr=False)
    argmax_suffixes: np.ndarray = field(repr=False)
    average_compromise_probability: float

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrefixLeakProfile):
            return NotImplemented
        return (
            (self.n, self.m, self.average_compromise_probability)
            == (other.n, other.m, other.average_compromise_probability)
            and np.array_equal(self.prefix_probabilities, other.prefix_probabilities)
            and np.array_equal(self.max_conditional, other.max_conditional)
            and np.array_equal(self.argmax_suffixes, other.argmax_suffixes)
        )

    __hash__ = None

    @property
    def zero_mass(self) -> np.ndarray:
        return self.prefix_probabilities <= 0.0

    def row(self, prefix: int | BitString) -> PrefixLeakRow:
        i = prefix.to_int() if isinstance(prefix, BitString) else int(prefix)
        return PrefixLeakRow(
            prefix=BitString.from_int(i, self.m),
            prefix_probability=float(self.prefix_probabilities[i]),
            max_conditional_suffix_probability=float(self.max_conditional[i]),
            argmax_suffix=BitString.from_int(int(self.argmax_suffixes[i]), self.n - self.m),
            zero_mass=bool(self.prefix_probabilities[i] <= 0.0),
        )

    @property
    def rows(self) -> list[PrefixLeakRow]:
        return [self.row(i) for i in range(1 << self.m)]

    def __len__(self) -> int:
        return 1 << self.m

    def __iter__(self) -> Iterator[PrefixLeakRow]:
        return (self.row(i) for i in range(1 << self.m))


def prefix_leak_profile(p: KeyDistribution, m: int) -> PrefixLeakProfile:
    """Tabulate, for every ``m``-bit prefix, the best conditional suffix guess.

    ``average_compromise_probability`` is the success probability of an
    attacker who learns the prefix and then guesses the most likely suffix.
    """
    _check_prefix(p.n, m)
    blocks = p.probs.reshape(1 << m, 1 << (p.n - m))
    prefix_probs = blocks.sum(axis=1)
    argmax = blocks.argmax(axis=1)
    row_max = blocks[np.arange(blocks.shape[0]), argmax]
    with np.errstate(divide="ignore", invalid="ignore"):
        max_cond = np.where(prefix_probs > 0, row_max / prefix_probs, 0.0)
    max_cond = np.minimum(max_cond, 1.0)
    average = float(np.dot(prefix_probs, max_cond))
    for arr in (prefix_probs, max_cond, argmax):
        arr.setflags(write=False)
    return PrefixLeakProfile(
        n=p.n,
        m=m,
        prefix_probabilities=prefix_probs,
        max_conditional=max_cond,
        argmax_suffixes=argmax,
        average_compromise_probability=average,
    )


def reconstruct_from_prefixes(parts: Iterable[tuple[float, KeyDistribution | None]], n: int) -> KeyDistribution:
    """Inverse of conditioning on every prefix, in prefix index order.

    ``None`` stands for a zero-mass prefix whose block is all zeros.
    """
    parts = list(parts)
    m = (len(parts)).bit_length() - 1
    if len(parts) != 1 << m:
        raise ValueError("number of prefix blocks must be a power of two")
    width = 1 << (n - m)
    blocks = []
    for mass, cond in parts:
        if cond is None:
            blocks.append(np.zeros(width))
        else:
            if cond.size != width:
                raise ValueError("conditional block has the wrong size")
            blocks.append(mass * cond.probs)
    return KeyDistribution(n, np.concatenate(blocks))


__all__ = [
    "MAX_N",
    "BitString",
    "KeyDistribution",
    "PrefixLeakProfile",
    "PrefixLeakRow",
    "SizeError",
    "ZeroMassError",
    "conditional_on_prefix",
    "counterexample_distribution",
    "from_probabilities",
    "guessing_probability",
    "point_mass",
    "prefix_leak_profile",
    "random_distribution",
    "reconstruct_from_prefixes",
    "statistical_distance",
    "uniform",
]
