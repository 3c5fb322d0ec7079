from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imperfect_key.distributions import BitString, point_mass, statistical_distance, uniform
from imperfect_key.privacy_amplification import (
    BinaryMatrix,
    SideInformation,
    apply_code,
    code_delta,
    delta_for_rank,
    eve_final_key_distribution,
    gf2_rank,
    residual_rank,
    sample_toeplitz_code,
    scan_code_family,
    scan_codes,
)

import oracles


@st.composite
def code_and_side(draw, max_raw=10, max_out=6):
    k_raw = draw(st.integers(1, max_raw))
    k_out = draw(st.integers(1, min(k_raw, max_out)))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    if draw(st.booleans()):
        code = sample_toeplitz_code(k_out, k_raw, int(rng.integers(2**63)))
    else:
        code = BinaryMatrix(rng.integers(0, 2, size=(k_out, k_raw)))
    side = SideInformation.random(k_raw, draw(st.integers(0, k_raw)), rng)
    return code, side


def test_toeplitz_tiny_and_diagonals():
    m = sample_toeplitz_code(1, 1, 5)
    assert m.entries.shape == (1, 1)
    big = sample_toeplitz_code(6, 11, 99)
    e = big.entries
    for i in range(5):
        for j in range(10):
            assert e[i, j] == e[i + 1, j + 1]


def test_toeplitz_seeding():
    assert sample_toeplitz_code(8, 16, 1) == sample_toeplitz_code(8, 16, 1)
    distinct = {sample_toeplitz_code(8, 16, s).entries.tobytes() for s in range(20)}
    assert len(distinct) == 20


@pytest.mark.parametrize("k_out,k_raw", [(0, 3), (4, 3), (5, 25)])
def test_toeplitz_dimension_errors(k_out, k_raw):
    with pytest.raises(ValueError):
        sample_toeplitz_code(k_out, k_raw, 0)


def test_apply_identity_and_zero():
    raw = BitString.from_str("1011001")
    assert apply_code(BinaryMatrix.identity(7), raw) == raw
    assert apply_code(BinaryMatrix.zeros(3, 7), raw) == BitString.zeros(3)
    with pytest.raises(ValueError):
        apply_code(BinaryMatrix.identity(6), raw)


@given(st.integers(0, 2**32 - 1))
def test_apply_linear(seed):
    rng = np.random.default_rng(seed)
    k_raw = int(rng.integers(1, 25))
    code = BinaryMatrix(rng.integers(0, 2, size=(int(rng.integers(1, k_raw + 1)), k_raw)))
    a, b = (BitString.from_int(int(rng.integers(2**k_raw)), k_raw) for _ in range(2))
    assert apply_code(code, a ^ b) == apply_code(code, a) ^ apply_code(code, b)
    assert apply_code(code, a) == BitString(oracles.hash_bits(code.entries.tolist(), a.bits))


def test_gf2_rank_small_cases():
    assert gf2_rank([]) == 0
    assert gf2_rank([0, 0]) == 0
    assert gf2_rank([0b11, 0b01, 0b10]) == 2
    assert gf2_rank([1 << i for i in range(10)]) == 10


@given(st.lists(st.integers(0, 2**6 - 1), max_size=8))
def test_gf2_rank_by_span_size(vectors):
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    assert 2 ** gf2_rank(vectors) == len(span)


def test_side_information_validation():
    with pytest.raises(ValueError):
        SideInformation((2, 1), (0, 0))
    with pytest.raises(ValueError):
        SideInformation((1,), (0, 1))
    with pytest.raises(ValueError):
        SideInformation((0,), (2,))
    with pytest.raises(ValueError):
        SideInformation((4,), (0,)).check(4)


@settings(max_examples=150, deadline=None)
@given(code_and_side())
def test_rank_method_matches_fraction_oracle(case):
    code, side = case
    expected = oracles.final_key_distribution(
        code.entries.tolist(), code.k_raw, dict(zip(side.known_positions, side.known_values))
    )
    for method in ("rank", "enumerate"):
        got = eve_final_key_distribution(code, side, method=method)
        assert [Fraction(x) for x in got.probs] == expected


@settings(max_examples=100, deadline=None)
@given(code_and_side(max_raw=14, max_out=8))
def test_delta_takes_rank_values(case):
    code, side = case
    r = residual_rank(code, side)
    delta = code_delta(code, side)
    assert delta == delta_for_rank(r, code.k_out)
    assert delta in {1 - 2.0 ** (j - code.k_out) for j in range(code.k_out + 1)}


@pytest.mark.parametrize("n,t", [(4, 0), (4, 2), (8, 5), (12, 12)])
def test_identity_code_closed_form(n, t):
    side = SideInformation(tuple(range(t)), (1,) * t)
    assert code_delta(BinaryMatrix.identity(n), side) == 1 - 2.0**-t


def test_full_rank_residual_is_uniform():
    code = BinaryMatrix.identity(5)
    assert eve_final_key_distribution(code, SideInformation()) == uniform(5)


def test_all_bits_known_gives_point_mass():
    code = sample_toeplitz_code(4, 9, 3)
    raw = BitString.from_str("110010111")
    side = SideInformation(tuple(range(9)), raw.bits)
    dist = eve_final_key_distribution(code, side)
    assert dist == point_mass(apply_code(code, raw))
    assert statistical_distance(dist, uniform(4)) == 1 - 2.0**-4


def test_unknown_method():
    with pytest.raises(ValueError):
        eve_final_key_distribution(BinaryMatrix.identity(2), SideInformation(), method="magic")


@settings(max_examples=100, deadline=None)
@given(code_and_side(max_raw=12), st.data())
def test_more_side_information_never_lowers_delta(case, data):
    code, side = case
    unknown = side.unknown_positions(code.k_raw)
    if not unknown:
        return
    pos = data.draw(st.sampled_from(unknown))
    more = side.with_known(pos, data.draw(st.integers(0, 1)))
    assert code_delta(code, more) >= code_delta(code, side)


def test_scan_no_side_information():
    scan = scan_code_family(3, 8, SideInformation(), 50, 1)
    # a Toeplitz code can be rank-deficient only if its bits are all zero
    assert np.all(scan.delta_values[scan.ranks == 3] == 0.0)
    identity_scan = scan_codes([BinaryMatrix.identity(4)] * 10, SideInformation())
    assert identity_scan.mean_delta == 0.0
    assert identity_scan.markov_check == ()


def test_scan_single_code_repeated():
    code = sample_toeplitz_code(4, 12, 8)
    side = SideInformation((0, 2, 4, 6, 8, 10), (1, 0, 1, 0, 1, 0))
    scan = scan_codes([code] * 25, side)
    assert np.all(scan.delta_values == scan.mean_delta)
    assert all(v == scan.mean_delta for v in scan.quantiles.values())


def test_scan_markov_example():
    side = SideInformation.random(12, 6, np.random.default_rng(0))
    scan = scan_code_family(4, 12, side, 1000, 7)
    assert scan.codes_sampled == 1000
    assert [c.threshold for c in scan.markov_check] == [
        scan.mean_delta**0.5, 2 * scan.mean_delta, 10 * scan.mean_delta]
    for c in scan.markov_check:
        assert c.fraction_exceeding <= scan.mean_delta / c.threshold + 1e-12
    assert scan.markov_holds


def test_scan_deterministic_across_workers():
    side = SideInformation((1, 5, 7), (0, 1, 1))
    a = scan_code_family(5, 10, side, 64, 2024, workers=1)
    b = scan_code_family(5, 10, side, 64, 2024, workers=4)
    assert np.array_equal(a.delta_values, b.delta_values)
    assert a.quantiles == b.quantiles and a.markov_check == b.markov_check


def test_scan_errors():
    with pytest.raises(ValueError):
        scan_code_family(4, 12, SideInformation(), 0, 1)
    with pytest.raises(ValueError):
        scan_code_family(4, 3, SideInformation(), 5, 1)
    with pytest.raises(ValueError):
        scan_code_family(2, 4, SideInformation((5,), (0,)), 5, 1)
