import json
import math
from fractions import Fraction

import numpy as np

from app.utils import canonical_json, digest, format_float
from models.data_type import SpaceKind


def test_canonical_json_is_valid_and_sorted():
    text = canonical_json({"b": 1, "a": [0.1, None, True], "c": {}})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert json.loads(text) == {"a": [0.1, None, True], "b": 1, "c": {}}


def test_strings_are_escaped():
    value = 'quote " backslash \\ newline \n tab \t bell \x07 delta δ'
    text = canonical_json({"key \"1\"": value})
    assert json.loads(text) == {"key \"1\"": value}
    assert "δ" in text


def test_numbers_enums_and_rationals():
    data = json.loads(
        canonical_json(
            {
                "nan": math.nan,
                "inf": -math.inf,
                "third": 1 / 3,
                "array": np.array([1.5, 2.0]),
                "int": np.int64(7),
                "kind": SpaceKind.DIRICHLET_SINE,
                "p": Fraction(11, 5),
            }
        )
    )
    assert data["nan"] is None and data["inf"] is None
    assert data["third"] == 1 / 3
    assert data["array"] == [1.5, 2.0]
    assert data["int"] == 7
    assert data["kind"] == "dirichlet-sine"
    assert data["p"] == "11/5"


def test_float_format_round_trips():
    assert float(format_float(0.1)) == 0.1
    assert format_float(math.inf) == "null"


def test_digest_ignores_key_order():
    assert digest({"a": 1, "b": 2}) == digest({"b": 2, "a": 1})
    assert len(digest({})) == 64
