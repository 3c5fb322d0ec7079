import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from imperfect_key.distributions import counterexample_distribution, uniform
from imperfect_key.reporting import (
    distribution_from_csv,
    distribution_to_csv,
    format_float,
    format_human,
    to_csv,
    to_json,
)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_float_round_trips(x):
    assert float(format_float(x)) == x


def test_format_float_digits():
    assert format_float(0.1) == "0.10000000000000001"
    with pytest.raises(ValueError):
        format_float(float("nan"))


def test_format_human():
    assert format_human(1e-7) == "1e-07 (log10 -7)"
    assert format_human(0.0) == "0"


def test_to_json_parses_and_keeps_digits():
    obj = {"a": 0.1, "b": [1, True, None, "x"], "c": {}}
    text = to_json(obj)
    assert json.loads(text) == obj
    assert "0.10000000000000001" in text
    assert text.endswith("\n")


def test_to_csv():
    text = to_csv(["a", "b"], [[1, 0.5], ["00ff", True]])
    assert text == "a,b\n1,0.5\n00ff,true\n"
    with pytest.raises(ValueError):
        to_csv(["a"], [[1, 2]])
    with pytest.raises(ValueError):
        to_csv(["a"], [["x,y"]])


def test_distribution_csv_round_trip():
    p = counterexample_distribution(5, 2)
    text = distribution_to_csv(p)
    assert text.splitlines()[0] == "index,probability"
    assert text.splitlines()[1] == "0,0.25"
    assert distribution_from_csv(text) == p
    assert distribution_from_csv(distribution_to_csv(uniform(3))) == uniform(3)


def test_distribution_csv_rejects_shuffled_indices():
    with pytest.raises(ValueError):
        distribution_from_csv("index,probability\n1,0.5\n0,0.5\n")
