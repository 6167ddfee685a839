# testing/test_json_utils.py
from dataclasses import dataclass
from fractions import Fraction

import pandas as pd

from utils.json_utils import to_jsonable


@dataclass
class _Row:
    name: str
    value: Fraction


def test_scalars_pass_through():
    assert to_jsonable(True) is True
    assert to_jsonable(None) is None
    assert to_jsonable(3) == 3
    assert to_jsonable("x") == "x"


def test_rationals_are_exact_strings():
    assert to_jsonable(Fraction(1, 2)) == "1/2"
    assert to_jsonable(Fraction(4, 2)) == "2"


def test_containers():
    assert to_jsonable({1: (2, 3)}) == {"1": [2, 3]}
    assert to_jsonable({3, 1, 2}) == [1, 2, 3]
    assert to_jsonable(_Row("a", Fraction(-1, 3))) == {"name": "a", "value": "-1/3"}


def test_dataframes():
    df = pd.DataFrame([{"n": 2, "cut": True}, {"n": 3, "cut": False}])
    rows = to_jsonable(df)
    assert rows == [{"n": 2, "cut": True}, {"n": 3, "cut": False}]
    assert type(rows[0]["n"]) is int
    assert to_jsonable(df["n"]) == {"0": 2, "1": 3}
