"""Inequality validators: boundary cases, domains, batteries."""

from __future__ import annotations

import math

import pytest

from regfactor.errors import DomainViolation
from regfactor.proofcheck import (
    LEMMA_IDS,
    check_inequality,
    lemma23_band,
    lemma23_threshold,
    run_battery,
)


class TestPointChecks:
    def test_21_boundary_lambda_zero(self):
        c = check_inequality("2.1", 0.0, 2.0)
        assert c.lhs == 1.0 and c.rhs == 1.0 and c.slack == 0.0

    def test_21_half_pi(self):
        # modulus (1 - 2*(1/4)*2)^(1/2) = 0; bound exp(-pi^2/8 + pi^4/96) > 0
        c = check_inequality("2.1", 0.5, math.pi)
        assert c.lhs == pytest.approx(0.0, abs=1e-15)
        assert c.rhs == pytest.approx(math.exp(-math.pi**2 / 8 + math.pi**4 / 96))
        assert c.holds

    def test_21_domain(self):
        with pytest.raises(DomainViolation):
            check_inequality("2.1", 1.5, 0.0)
        with pytest.raises(DomainViolation):
            check_inequality("2.1", 0.5, 4.0)

    def test_22a_equality_at_zero_sum(self):
        # the first inequality is tight exactly when the coordinates sum to 0
        c = check_inequality("2.2a", (1.0, -1.0))
        assert c.slack == pytest.approx(0.0, abs=1e-15)
        c = check_inequality("2.2a", (2.0, -3.0, 1.0))
        assert c.slack == pytest.approx(0.0, abs=1e-12)

    def test_22b_holds(self):
        c = check_inequality("2.2b", (1.0, 2.0, -1.5, 0.25))
        assert c.holds

    def test_25_spec_point(self):
        c = check_inequality("2.5", (1.0, 1.0, 1.0), 2)
        # k! e_2 = 6 <= 9 <= 6 + 1*1*3 = 9: both inequalities tight/valid
        assert c.holds
        assert {c.lhs, c.rhs} <= {6.0, 9.0}
        assert c.slack == pytest.approx(0.0)

    def test_24_bound(self):
        c = check_inequality("2.4", 50.0, 2)
        assert c.holds
        assert c.rhs == pytest.approx(math.sqrt(2 * math.pi) * 2 * 50 ** (-1.5))


class TestLemma23:
    def test_band_fails_below_threshold(self):
        val, c, w = lemma23_band(10.0)
        assert abs(val - c) > w  # the closed band is false at m = 10

    def test_band_holds_on_decades(self):
        for m in (100.0, 1000.0, 10000.0):
            val, c, w = lemma23_band(m)
            assert abs(val - c) <= w

    def test_threshold_bracket(self):
        m0 = lemma23_threshold()
        assert 10 < m0 <= 100
        v, c, w = lemma23_band(float(m0))
        assert abs(v - c) <= w
        v, c, w = lemma23_band(float(m0 - 1))
        assert abs(v - c) > w

    def test_domain_enforced(self):
        with pytest.raises(DomainViolation):
            check_inequality("2.3", 10.0)
        assert check_inequality("2.3", 200.0).holds


class TestBatteries:
    @pytest.mark.parametrize("lemma", LEMMA_IDS)
    def test_no_violations_small(self, lemma):
        r = run_battery(lemma, trials=20_000, seed=11)
        assert r.passed, (lemma, r.worst_slack, r.worst_point)

    def test_deterministic(self):
        a = run_battery("2.2b", trials=5000, seed=3)
        b = run_battery("2.2b", trials=5000, seed=3)
        assert a.worst_slack == b.worst_slack and a.worst_point == b.worst_point

    def test_unknown_lemma(self):
        with pytest.raises(ValueError):
            run_battery("9.9", 10, 0)
