"""Tests for nested-grid convergence studies."""

from __future__ import annotations

import pytest

from opalg import config
from opalg.numeric import GridSpec, convergence


def test_needs_three_levels():
    with pytest.raises(ValueError, match="at least 3 levels"):
        convergence("massless-cr", levels=2)


def test_exact_case_reports_no_orders():
    report = convergence("speed", levels=3, base_spec=GridSpec(n=9))
    assert report.passed
    assert report.detail == "exact"
    assert [r.n for r in report.rows] == [9, 17, 33]
    assert all(r.order is None for r in report.rows)


def test_expected_nonzero_stays_at_its_limit():
    report = convergence("massive-speed", levels=3, base_spec=GridSpec(n=9))
    assert report.passed
    assert all(r.limit is not None and r.residual >= 0.5 * r.limit for r in report.rows)


@pytest.mark.slow
def test_massless_commutator_converges_at_second_order():
    report = convergence("massless-cr", levels=3, base_spec=GridSpec(n=17))
    assert [r.n for r in report.rows] == [17, 33, 65]
    orders = [r.order for r in report.rows[:-1]]
    assert all(config.ORDER_MIN <= o <= config.ORDER_MAX for o in orders), orders
    assert report.rows[-1].order is None
    assert report.passed
    assert (report.note is not None) == (report.rows[-1].residual > config.FINEST_TARGET)


@pytest.mark.slow
def test_massive_velocity_commutator_approaches_limit():
    report = convergence("massive-qv", levels=3, base_spec=GridSpec(n=17))
    finest = report.rows[-1]
    assert report.passed
    assert finest.residual == pytest.approx(finest.limit, rel=0.01)


def test_finest_shortfall_is_noted(monkeypatch):
    monkeypatch.setattr(config, "FINEST_TARGET", 0.0)
    report = convergence("massive-cr", levels=3, base_spec=GridSpec(n=9))
    assert report.note is not None
    assert report.note.startswith("finest residual")


def test_no_note_when_target_met(monkeypatch):
    monkeypatch.setattr(config, "FINEST_TARGET", 1.0)
    assert convergence("massive-cr", levels=3, base_spec=GridSpec(n=9)).note is None


def test_exact_cases_carry_no_note():
    assert convergence("speed", levels=3, base_spec=GridSpec(n=9)).note is None
