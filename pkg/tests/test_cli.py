import csv
import json

import pytest

from rieszprod.cli import RunConfig, load_config, main
from rieszprod.errors import ConfigInvalid


def _run(tmp_path, name, *args):
    out = tmp_path / name
    return main([*args, "--out", str(out)]), out


def test_malformed_config_exit_2(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    code, out = _run(tmp_path, "o", "--config", str(cfg), "verify")
    assert code == 2 and not out.exists()


@pytest.mark.parametrize(
    "data",
    [
        {"command": "verify", "colour": 1},
        {"command": "nope"},
        {"command": "verify", "target": "L0.0"},
        {"command": "riesz", "N": 0},
        {"command": "riesz", "coeffs": {"kind": "random", "m": -1}},
        {"command": "riesz", "e_norms": ["l3"]},
        {"command": "counterexample", "p_even": 3},
    ],
)
def test_invalid_configs(tmp_path, data):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(data))
    code, out = _run(tmp_path, "o", "--config", str(cfg))
    assert code == 2 and not out.exists()


def test_bad_flag_value(tmp_path):
    code, out = _run(tmp_path, "o", "riesz", "--seed", "-1")
    assert code == 2 and not out.exists()


def test_missing_command():
    with pytest.raises(ConfigInvalid):
        load_config([])


def test_flag_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "riesz", "seed": 5, "N": 2}))
    conf = load_config(["--config", str(cfg), "--seed", "9"])
    assert conf.seed == 9 and conf.N == 2 and conf.command == "riesz"
    conf = load_config(["verify", "L4.2", "--threads", "2"])
    assert conf.target == "L4.2" and conf.threads == 2


def test_defaults():
    conf = RunConfig("verify")
    assert conf.d_list == (3, 4, 5) and conf.p_list == (1.0, 1.5, 2.0, 3.0, 4.0) and conf.N == 5


def test_verify_single_statement(tmp_path):
    code, out = _run(tmp_path, "o", "verify", "L4.2")
    assert code == 0
    rows = list(csv.DictReader((out / "summary.csv").open()))
    assert rows and all(r["statement_id"] == "L4.2" and r["pass"] == "true" for r in rows)
    assert len((out / "results.jsonl").read_text().splitlines()) == len(rows)


def test_budget_exhaustion_fails(tmp_path):
    code, out = _run(tmp_path, "o", "verify", "L4.1", "--budget-ms", "0")
    assert code == 1
    assert "BUDGET" in (out / "summary.csv").read_text()


def test_counterexample_plot_data(tmp_path):
    code, out = _run(tmp_path, "o", "counterexample")
    assert code == 0
    growth = list(csv.DictReader((out / "growth.csv").open()))
    assert [r["k"] for r in growth] == ["1", "2", "3"]
    assert (out / "discrepancy.csv").exists()


def test_estimate_constants_repeatable(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "estimate-constants", "d_list": [3], "p_list": [1.5, 2.0], "N": 2, "search_budget": 4, "seed": 12}))
    a, oa = _run(tmp_path, "a", "--config", str(cfg))
    b, ob = _run(tmp_path, "b", "--config", str(cfg), "--threads", "2")
    assert a == b == 0
    for name in ("summary.csv", "results.jsonl", "estimates.csv"):
        assert (oa / name).read_bytes() == (ob / name).read_bytes()
