"""
=====================================
From average levels to per-trial odds
=====================================

Each averaging layer hidden in a stated distance level costs a Markov step,
so ``k`` layers turn an average level ``d`` into an individual guarantee of
``d ** (1 / (k + 1))``.
"""

# %%
import math

from imperfect_key.guarantee import (
    ATTACK_PRESETS,
    LEVEL_PRESETS,
    GuaranteeLevel,
    markov_tightness_witness,
    required_d,
    rounds_budget,
    verify_markov,
)

for level, d in LEVEL_PRESETS.items():
    for attack, k in ATTACK_PRESETS.items():
        eff = GuaranteeLevel(d, k).effective
        print(f"{level:>10} {attack:>16}: effective {eff:.3g} (log10 {math.log10(eff):.3f})")

# %%
# Working backwards: what average level keeps a known-plaintext attacker at
# ``1e-20`` per trial, and what does that buy over ``1e5`` rounds?

need = required_d(1e-20, ATTACK_PRESETS["known-plaintext"])
print(f"required d = {need:.3g}; union bound over 1e5 rounds = {rounds_budget(1e-20, 10**5):.3g}")

# %%
# The Markov step cannot be improved
# ----------------------------------
# A two-point variable with mean ``d`` exceeds ``sqrt(d)`` with probability
# exactly ``sqrt(d)``.

import numpy as np

w = markov_tightness_witness(0.01)
check = verify_markov(w.sample(100_000, np.random.default_rng(0)), threshold=0.1)
print(f"witness: value {w.value:.3g} w.p. {w.probability:.3g}, mean {w.mean:.3g}")
print(f"sampled tail {check.fraction_exceeding:.4f} vs Markov bound {check.bound:.4f}")
