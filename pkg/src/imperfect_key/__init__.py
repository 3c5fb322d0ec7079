"""Exact analysis of imperfect one-time-pad keys and the guarantees a statistical-distance level gives."""

from .distributions import (
    MAX_N,
    BitString,
    KeyDistribution,
    PrefixLeakProfile,
    SizeError,
    ZeroMassError,
    conditional_on_prefix,
    counterexample_distribution,
    guessing_probability,
    point_mass,
    prefix_leak_profile,
    statistical_distance,
    uniform,
)
from .guarantee import (
    GuaranteeLevel,
    effective_level,
    markov_tightness_witness,
    required_d,
    rounds_budget,
    verify_markov,
)
from .otp import (
    AttackReport,
    AttackScenario,
    ciphertext_only_success,
    known_plaintext_success,
    otp_encrypt,
    simulate_attack,
)
from .privacy_amplification import (
    BinaryMatrix,
    CodeFamilyScan,
    SideInformation,
    apply_code,
    eve_final_key_distribution,
    sample_toeplitz_code,
    scan_code_family,
)

__version__ = "0.1.0"
