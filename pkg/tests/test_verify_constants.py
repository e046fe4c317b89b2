import pytest

from rieszprod.approx import ConstantLedger, Tag
from rieszprod.verify.constants import MULTIPLIERS, empirical_constants, fill_ledger
from rieszprod.verify.lemmas import c3_floor


@pytest.fixture(scope="module")
def est():
    return empirical_constants(2.0)


def test_multipliers_on_grid(est):
    assert est.C3 in MULTIPLIERS and est.C5 in MULTIPLIERS


def test_single_term_constant_above_floor(est):
    assert est.c3 >= c3_floor(2.0)


def test_cross_term_constants_finite(est):
    assert 0 <= est.C6 < float("inf") and 0 <= est.C7 < float("inf")
    assert est.instances > 0


def test_ledger_entries_are_empirical(est):
    led = fill_ledger(2.0, ConstantLedger(), est)
    for name in ("C3", "c3", "C5", "C6", "C7"):
        assert led.get(2.0, name).tag is Tag.EMPIRICAL


def test_rejects_p_one():
    with pytest.raises(ValueError):
        empirical_constants(1.0)
