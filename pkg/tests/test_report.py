import json
from dataclasses import dataclass, field
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from pmfix import catalog
from pmfix.report import fmt_num, to_data, to_json, to_text
from pmfix.solver import solve_fixed_point


def test_fmt_num():
    assert fmt_num(0.0) == "0"
    assert fmt_num(-0.0) == "0"
    assert fmt_num(2.0) == "2"
    assert fmt_num(-3) == "-3"
    assert fmt_num(0.1) == "0.1"
    assert fmt_num(Fraction(9, 4)) == "2.25"
    assert fmt_num(1e300) == "1e+300"
    assert fmt_num(float("nan")) == "nan"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_num_round_trips(v):
    assert float(fmt_num(v)) == v


@dataclass(frozen=True)
class _Inner:
    a: float
    b: tuple


@dataclass(frozen=True)
class _Outer:
    name: str
    flag: bool
    missing: object
    inner: _Inner
    items: tuple
    rows: tuple
    hidden: object = field(default=None, repr=False)


def test_text_layout():
    obj = _Outer("n", True, None, _Inner(1.5, (1.0, 2.0)), (_Inner(0.0, ()),), ((1, 2), (3, 4)), "x")
    assert to_text(obj) == (
        "name: n\n"
        "flag: true\n"
        "missing: none\n"
        "inner:\n"
        "  a: 1.5\n"
        "  b: [1, 2]\n"
        "items:\n"
        "  - a: 0\n"
        "    b: []\n"
        "rows:\n"
        "  - [1, 2]\n"
        "  - [3, 4]\n"
    )


def test_json_key_order_and_hidden_fields():
    obj = _Outer("n", False, None, _Inner(1.5, ()), (), (), "secret")
    data = json.loads(to_json(obj))
    assert list(data) == ["name", "flag", "missing", "inner", "items", "rows"]
    assert to_data(float("inf")) is None


def test_solve_result_report_skips_orbit():
    e = catalog.get("example1")
    text = to_text(solve_fixed_point(e.space, e.map, -1.0))
    assert "orbit" not in text
    assert "status: FixedPointFound" in text
    assert text == to_text(solve_fixed_point(e.space, e.map, -1.0))
