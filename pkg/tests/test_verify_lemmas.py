import pytest

from rieszprod.errors import HypothesisViolation
from rieszprod.verify.lemmas import ESTIMATORS, STATEMENT_IDS, check_lemma, default_instances, run_statement

FAST = ["L4.1", "L4.2", "L4.4", "L4.5", "L4.5a", "L4.6", "L2.3", "C2", "C6.1", "C6.2", "L6.3", "T5.5-1", "L5.3"]


def test_beta_equality_case():
    r = check_lemma("L4.2", {"k": 1, "p": 1})
    assert r.passed and r.margin == 0 and r.exact[0] == r.exact[1]


def test_bernstein_equality_case():
    r = check_lemma("L4.5a", {"kind": "cos", "d": 5, "p": 3})
    assert r.passed and abs(r.margin) < 1e-12


def test_product_integral_exact():
    r = check_lemma("L4.5", {"seq": [1, 2], "d": 1, "g": [{"kind": "one_plus_cos"}, {"kind": "one_plus_cos"}]})
    assert r.passed and r.exact is not None and r.exact[0] == r.exact[1] == 1


def test_unknown_statement():
    with pytest.raises(KeyError):
        check_lemma("L9.9", {})


def test_hypotheses_enforced():
    with pytest.raises(HypothesisViolation):
        check_lemma("L6.3", {"p": 2.0, "k": 1, "ls": [1], "seq": [1, 4, 16]})


@pytest.mark.parametrize("sid", FAST)
def test_default_grid_passes(sid):
    results = run_statement(sid)
    assert results and all(r.passed for r in results), [r.note for r in results if not r.passed]


@pytest.mark.parametrize("sid", ESTIMATORS)
def test_estimators_report_finite_constants(sid):
    results = run_statement(sid)
    assert all(r.relation == "estimate" and r.passed and r.lhs >= 0 for r in results)


def test_rerun_is_identical():
    a = [r.to_dict() for r in run_statement("L4.1")]
    b = [r.to_dict() for r in run_statement("L4.1")]
    assert a == b


def test_ids_are_stable():
    assert STATEMENT_IDS[:4] == ("L4.1", "L4.2", "L4.4", "L4.5")
    assert all(default_instances(s) for s in STATEMENT_IDS if s != "P5.6")
