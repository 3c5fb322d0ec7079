import numpy as np
from hypothesis import strategies as st

from imperfect_key.distributions import KeyDistribution


@st.composite
def distributions(draw, min_n=1, max_n=8, sparse=True):
    """Random key distributions, optionally with some zero entries."""
    n = draw(st.integers(min_n, max_n))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    alpha = draw(st.sampled_from([0.1, 1.0, 10.0]))
    probs = rng.dirichlet(np.full(2**n, alpha))
    if sparse and draw(st.booleans()):
        mask = rng.random(2**n) < 0.5
        mask[rng.integers(2**n)] = True
        probs = np.where(mask, probs, 0.0)
    return KeyDistribution(n, probs / probs.sum())


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
