"""Entropy-power gap, step-condition, and threshold tests."""

from math import comb

import mpmath
import pytest
from mpmath import mpf

from discrete_epi.dist_core import IntegerPmf, binomial_pmf
from discrete_epi.epi_engine import (
    empirical_threshold,
    epi_gap,
    epi_grid_check,
    formula_thresholds,
    iid_epi_gap,
    semi_asymptotic_condition,
    sufficient_step_check,
    zero_crossing_scan,
)
from discrete_epi.precision import eps_for, working_precision

from conftest import assert_close


def oracle_gap(m: int, n: int, p: str) -> mpf:
    """Entropy power gap from first principles, independent of the engine."""

    def h(trials: int) -> mpf:
        pv = mpf(p)
        total = mpf(0)
        for k in range(trials + 1):
            w = mpmath.binomial(trials, k) * pv**k * (1 - pv) ** (trials - k)
            if w > 0:
                total -= w * mpmath.ln(w)
        return total

    return (
        mpmath.exp(2 * h(m + n)) - mpmath.exp(2 * h(m)) - mpmath.exp(2 * h(n))
    )


class TestEpiGap:
    def test_against_oracle(self, dps50):
        for m, n, p in ((1, 2, "0.5"), (2, 3, "0.3"), (1, 1, "0.9"), (4, 4, "0.62")):
            report = epi_gap(m, n, p)
            assert_close(report.gap, oracle_gap(m, n, p), "1e-35")

    def test_known_value_one_two_half(self, dps50):
        report = epi_gap(1, 2, "0.5")
        assert_close(report.gap, "0.3168057427120163", "1e-15")
        assert report.holds

    def test_symmetric_in_m_n(self, dps50):
        # Same two terms added in opposite order: equal up to final-ulp rounding.
        a, b = epi_gap(2, 5, "0.4"), epi_gap(5, 2, "0.4")
        assert_close(a.gap, b.gap, "1e-45")

    def test_single_pair_negative_off_center(self, dps50):
        for p in ("0.1", "0.3", "0.45", "0.7", "0.9"):
            report = epi_gap(1, 1, p)
            assert report.gap < 0
            assert not report.holds

    def test_single_pair_zero_at_half(self, dps50):
        report = epi_gap(1, 1, "0.5")
        assert abs(report.gap) < mpf("1e-30")
        assert report.holds

    def test_rejects_bad_sizes(self, dps50):
        with pytest.raises(ValueError):
            epi_gap(0, 1, "0.5")


class TestIidGap:
    def test_bernoulli_base_matches_binomial_engine(self, dps50):
        base = binomial_pmf(1, "0.3")
        direct = epi_gap(2, 3, "0.3")
        generic = iid_epi_gap(base, 2, 3)
        assert_close(generic.gap, direct.gap, "1e-40")
        assert generic.p is None

    def test_uniform_base_large_sizes_hold(self, dps50):
        base = IntegerPmf.from_weights(["1/3", "1/3", "1/3"])
        report = iid_epi_gap(base, 32, 32)
        assert report.gap >= 0
        assert report.holds


class TestStepCondition:
    def test_margin_definition(self, dps50):
        from discrete_epi.dist_core import binomial_entropy_chain

        chain = binomial_entropy_chain("0.3", 13)
        for n in (1, 5, 12):
            check = sufficient_step_check(n, "0.3")
            expected = chain[n + 1] - chain[n] - mpmath.ln(mpf(n + 1) / n) / 2
            assert_close(check.margin, expected, "1e-45")
            assert check.holds == (check.margin >= -eps_for(50))

    def test_symmetric_p_holds_everywhere_tested(self, dps50):
        for n in range(1, 60):
            assert sufficient_step_check(n, "0.5").holds

    def test_skewed_p_fails_then_holds(self, dps50):
        threshold = empirical_threshold("0.05", cap=60)
        n0 = threshold.empirical_n0
        assert n0 is not None and n0 > 1
        assert not sufficient_step_check(n0 - 1, "0.05").holds
        assert sufficient_step_check(n0, "0.05").holds


class TestThresholds:
    def test_formula_values_at_zero_skew(self, dps50):
        assert formula_thresholds(mpf(0)) == (7, 7)

    def test_formula_values_at_unit_skew(self, dps50):
        assert formula_thresholds(mpf(1)) == (12, 11)

    def test_formula_monotone_in_skew(self, dps50):
        previous = (7, 7)
        for i in range(1, 12):
            t = mpf(i) / 4
            current = formula_thresholds(t)
            assert current[0] >= previous[0]
            assert current[1] >= previous[1]
            previous = current

    def test_empirical_at_half_is_one(self, dps50):
        report = empirical_threshold("0.5", cap=40)
        assert report.empirical_n0 == 1
        assert report.formula_a == 7
        assert report.formula_b == 7

    def test_empirical_below_formula(self, dps50):
        for p in ("0.1", "0.25", "0.4"):
            report = empirical_threshold(p, cap=120)
            assert report.empirical_n0 is not None
            assert report.empirical_n0 <= report.formula_a
            assert report.empirical_n0 <= report.formula_b

    def test_unresolved_within_cap(self, dps50):
        report = empirical_threshold("0.05", cap=3)
        assert report.empirical_n0 is None

    def test_zero_crossings(self, dps50):
        assert zero_crossing_scan("0.5", cap=12) == []
        crossings = zero_crossing_scan("0.05", cap=40)
        assert len(crossings) == 1
        assert crossings[0] == empirical_threshold("0.05", cap=40).empirical_n0


class TestGrid:
    def test_six_by_six_at_half(self, dps50):
        cells = epi_grid_check(6, 6, "0.5")
        assert len(cells) == 36
        assert all(rep.holds for rep in cells.values())

    def test_matches_single_gap(self, dps50):
        cells = epi_grid_check(3, 4, "0.3")
        single = epi_gap(2, 4, "0.3")
        assert_close(cells[(2, 4)].gap, single.gap, "1e-45")


class TestSemiAsymptotic:
    def test_skewed_small_m_fails(self, dps50):
        check = semi_asymptotic_condition(1, "0.01")
        assert not check.holds
        assert check.lhs > check.rhs

    def test_symmetric_holds(self, dps50):
        check = semi_asymptotic_condition(1, "0.5")
        assert check.holds

    def test_skewed_holds_for_larger_m(self, dps50):
        # At p = 0.01 the Gaussian reference catches up once m grows.
        holds = [semi_asymptotic_condition(m, "0.01").holds for m in (1, 400)]
        assert holds == [False, True]
