"""
==============================================
A small distance that still gives the key away
==============================================

Build a key distribution whose first ``m`` bits, for one particular prefix,
determine the rest of the key. Its statistical distance from uniform is tiny,
yet a known-plaintext attacker who sees that prefix recovers the whole key.
"""

# %%
# The distribution
# ----------------

from imperfect_key import (
    AttackScenario,
    BitString,
    conditional_on_prefix,
    counterexample_distribution,
    guessing_probability,
    prefix_leak_profile,
    simulate_attack,
    statistical_distance,
    uniform,
)

n, m = 12, 4
p = counterexample_distribution(n, m)
delta = statistical_distance(p, uniform(n))
print(f"distance from uniform: {delta}  (2^-m = {2.0**-m}, gap 2^-n = {2.0**-n})")

# %%
# Without known plaintext Eve's best guess succeeds with probability equal to
# the largest single key probability.

print("ciphertext-only guessing probability:", guessing_probability(p)[0])

# %%
# Conditioning on the target prefix leaves a single possible suffix.

mass, cond = conditional_on_prefix(p, BitString.zeros(m))
print(f"prefix probability {mass}, best suffix probability {guessing_probability(cond)[0]}")

# %%
# Averaged over all prefixes, the best guess after learning ``m`` bits:

profile = prefix_leak_profile(p, m)
print("known-plaintext success:", profile.average_compromise_probability)
for row in profile.rows[:3]:
    print(f"  prefix {row.prefix}: P={row.prefix_probability:.6g} best={row.max_conditional_suffix_probability:.6g}")

# %%
# Monte Carlo check
# -----------------
# Sample keys, encrypt an all-zero plaintext, and let Eve attack.

report = simulate_attack(AttackScenario(p, m), trials=100_000, seed=2024)
print(f"empirical {report.empirical_success:.5f} +- {report.standard_error:.5f}"
      f" vs analytic {report.analytic_success:.5f}")
print("bits correct histogram:", report.bit_agreement_histogram)
