import csv
import json
import math
from fractions import Fraction

import pytest

from rieszprod.errors import IoFailure
from rieszprod.report import SUMMARY_COLUMNS, emit_report, format_float, format_rational, render
from rieszprod.verify.results import CheckResult, compare, stream


def _float_result():
    return compare("L4.2", {"k": 1, "p": 1.5}, 0.1, 0.2, "<=", "BETA", seed=3)


def _exact_result():
    return compare("L4.2", {"k": 1, "p": 1}, Fraction(1, 8), Fraction(1, 8), "<=", "BETA_EXACT")


def test_format_rational():
    assert format_rational(Fraction(3, 8)) == "3/2^3"
    assert format_rational(Fraction(1, 3)) == "1/3"
    assert format_rational(Fraction(5)) == "5"


def test_format_float_roundtrips():
    x = 0.1 + 0.2
    assert float(format_float(x)) == x
    assert format_float(math.inf) == "inf"


def test_empty_results_write_nothing(tmp_path):
    target = tmp_path / "out.csv"
    with pytest.raises(ValueError):
        emit_report([], "csv", target)
    assert not target.exists()


def test_single_result_one_row(tmp_path):
    path = emit_report([_float_result()], "csv", tmp_path / "s.csv")
    rows = list(csv.reader(path.open()))
    assert rows[0] == list(SUMMARY_COLUMNS) and len(rows) == 2
    assert rows[1][3] == "0.20000000000000001" and rows[1][7] == "3"


def test_mixed_exact_and_float():
    text = render([_exact_result(), _float_result()], "csv").splitlines()
    assert "1/2^3" in text[1] and "BETA_EXACT" in text[1]
    assert "0.10000000000000001" in text[2] and "BETA," in text[2]


def test_jsonl_handles_non_finite():
    bad = CheckResult("X", "{}", math.nan, 1.0, -math.inf, False, "ERROR")
    line = json.loads(render([bad], "jsonl"))
    assert line["lhs"] == "nan" and line["margin"] == "-inf"


def test_plain_dict_rows():
    text = render([{"k": 1, "r": Fraction(179, 175)}, {"k": 2, "r": 0.5}], "csv")
    assert text.splitlines() == ["k,r", "1,179/175", "2,0.5"]


def test_io_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(IoFailure):
        emit_report([_float_result()], "jsonl", blocker / "sub" / "r.jsonl")


def test_margin_orientation():
    assert compare("a", {}, 1.0, 2.0, ">=", "m").margin == -1.0
    assert compare("a", {}, 1.0, 1.0, "<", "m").passed is False
    assert compare("a", {}, 1.05, 0.1, "within", "m").passed


def test_streams_independent():
    a = stream(1, 0).random(4)
    assert (a == stream(1, 0).random(4)).all()
    assert not (a == stream(1, 1).random(4)).any()
    assert not (a == stream(2, 0).random(4)).any()
