"""Slow, independent reference computations used as test oracles.

Everything here works on plain Python ints and Fractions, enumerating keys
one by one, and shares no code with the package under test.
"""

from fractions import Fraction
from itertools import product


def counterexample_vector(n, m, prefix=0, suffix=0):
    """Probability vector as exact Fractions, built key by key."""
    probs = []
    for k in range(2**n):
        if k >> (n - m) == prefix:
            probs.append(Fraction(1, 2**m) if k % 2 ** (n - m) == suffix else Fraction(0))
        else:
            probs.append(Fraction(1, 2**n))
    return probs


def distance(p, q):
    return sum(abs(Fraction(a) - Fraction(b)) for a, b in zip(p, q)) / 2


def guess(p):
    best = 0
    for i, x in enumerate(p):
        if x > p[best]:
            best = i
    return p[best], best


def known_plaintext_success(p, n, m):
    """Eve learns the first m key bits of each key and guesses the likeliest completion."""
    total = 0
    for k, pk in enumerate(p):
        pre = k >> (n - m)
        candidates = [j for j in range(len(p)) if j >> (n - m) == pre]
        best = candidates[0]
        for j in candidates:
            if p[j] > p[best]:
                best = j
        if best == k:
            total += pk
    return total


def hash_bits(rows, raw_bits):
    return tuple(sum(a & b for a, b in zip(row, raw_bits)) % 2 for row in rows)


def final_key_distribution(rows, k_raw, known):
    """Eve's distribution on the hashed key; ``known`` maps position -> bit."""
    k_out = len(rows)
    free = [j for j in range(k_raw) if j not in known]
    counts = {}
    for fill in product((0, 1), repeat=len(free)):
        raw = [0] * k_raw
        for j, v in known.items():
            raw[j] = v
        for j, v in zip(free, fill):
            raw[j] = v
        out = hash_bits(rows, raw)
        idx = int("".join(map(str, out)), 2)
        counts[idx] = counts.get(idx, 0) + 1
    total = 2 ** len(free)
    return [Fraction(counts.get(i, 0), total) for i in range(2**k_out)]


def known_plaintext_success_linear(probs, n, m):
    """Single pass over all keys: the best completion per prefix, then its mass."""
    best = {}
    for k, pk in enumerate(probs):
        pre = k >> (n - m)
        if pre not in best or pk > best[pre][1]:
            best[pre] = (k, pk)
    return sum(pk for _, pk in best.values())
