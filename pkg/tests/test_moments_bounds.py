"""Moment, cumulant, and entropy-lower-bound tests with exact oracles."""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from discrete_epi.dist_core import binomial_pmf, entropy
from discrete_epi.moments_bounds import (
    bernoulli_cumulants,
    c_coeff,
    central_moment_brute,
    central_moment_closed,
    cumulants_from_raw_moments,
    cumulative_gamma_bound,
    faa_di_bruno_poly,
    gamma_l,
    harmonic_bound_violations,
    harmonic_lower_bound,
    harmonic_number,
    taylor_coeff,
    taylor_lower_bound,
)
from discrete_epi.precision import eps_for, working_precision

from conftest import assert_close, exact_central_moment

P_GRID = ("0.1", "0.25", "0.4", "0.5", "0.63", "0.8", "0.9")


class TestCumulants:
    def test_bernoulli_closed_forms(self, dps50):
        for p_str in P_GRID:
            p = mpf(p_str)
            q = 1 - p
            cums = bernoulli_cumulants(p, 4)
            assert_close(cums.kappa(1), p)
            assert_close(cums.kappa(2), p * q)
            assert_close(cums.kappa(3), p * q * (1 - 2 * p))
            assert_close(cums.kappa(4), p * q * (1 - 6 * p * q))

    def test_recurrence_additivity(self, dps50):
        # Cumulants of Binomial(2, p) from its raw moments are twice
        # the Bernoulli cumulants.
        p = "0.3"
        pmf = binomial_pmf(2, p)
        raw = [
            mpmath.fsum(w * mpf(k) ** j for k, w in pmf.items())
            for j in range(1, 5)
        ]
        doubled = cumulants_from_raw_moments(raw)
        single = bernoulli_cumulants(p, 4)
        for g in range(1, 5):
            assert_close(doubled.kappa(g), 2 * single.kappa(g))

    def test_order_bounds_enforced(self, dps50):
        cums = bernoulli_cumulants("0.4", 3)
        with pytest.raises(ValueError):
            cums.kappa(4)
        with pytest.raises(ValueError):
            cums.kappa(0)


class TestCentralMoments:
    def test_closed_matches_exact_rational(self, dps50):
        p = Fraction(3, 10)
        for n in (1, 2, 5, 17):
            for k in range(0, 8):
                exact = exact_central_moment(n, p, k)
                got = central_moment_closed(n, p, k)
                assert_close(got, mpf(exact.numerator) / exact.denominator)

    def test_closed_matches_brute(self, dps50):
        for p_str in ("0.1", "0.5", "0.77"):
            for n in (1, 3, 10, 40):
                pmf = binomial_pmf(n, p_str)
                for k in range(0, 8):
                    assert_close(
                        central_moment_closed(n, p_str, k),
                        central_moment_brute(pmf, k),
                        "1e-38",
                    )

    def test_rejects_unsupported_order(self, dps50):
        with pytest.raises(ValueError):
            central_moment_closed(3, "0.5", 8)


class TestFaaDiBruno:
    def test_low_order_structure(self, dps50):
        cums = bernoulli_cumulants("0.3", 8)
        poly2 = faa_di_bruno_poly(2, cums)
        poly3 = faa_di_bruno_poly(3, cums)
        poly4 = faa_di_bruno_poly(4, cums)
        assert set(poly2.coeffs) == {1}
        assert set(poly3.coeffs) == {1}
        assert set(poly4.coeffs) == {1, 2}
        assert_close(poly2.coeffs[1], cums.kappa(2))
        assert_close(poly3.coeffs[1], cums.kappa(3))
        assert_close(poly4.coeffs[1], cums.kappa(4))
        assert_close(poly4.coeffs[2], 3 * cums.kappa(2) ** 2)

    def test_evaluates_to_binomial_moments(self, dps50):
        for p_str in ("0.25", "0.5", "0.8"):
            cums = bernoulli_cumulants(p_str, 8)
            for k in range(2, 9):
                poly = faa_di_bruno_poly(k, cums)
                for j in (1, 2, 5, 8):
                    pmf = binomial_pmf(j, p_str)
                    assert_close(
                        poly.evaluate(j), central_moment_brute(pmf, k), "1e-38"
                    )


class TestTaylorCoefficients:
    def test_log_odds_first_order(self, dps50):
        x = mpf("0.3")
        assert_close(taylor_coeff(1, x), mpmath.ln(x) - mpmath.ln(1 - x))

    def test_second_order(self, dps50):
        for p_str in P_GRID:
            p = mpf(p_str)
            assert_close(taylor_coeff(2, p), 1 / (2 * p * (1 - p)))

    def test_fourth_order_at_half(self, dps50):
        assert_close(taylor_coeff(4, "0.5"), mpf(4) / 3)

    def test_third_order_spot_value(self, dps50):
        # [(1-x)**-2 - x**-2] / 6 at x = 1/4 is -64/27.
        assert_close(taylor_coeff(3, "0.25"), mpf(-64) / 27)

    def test_even_orders_nonnegative(self, dps50):
        for p_str in P_GRID:
            for k in (2, 4, 6, 8):
                assert taylor_coeff(k, p_str) >= 0

    def test_lower_bound_property(self, dps50):
        # The odd-truncated expansion never exceeds the entropy defect.
        from discrete_epi.dist_core import bernoulli_entropy

        for p_str in ("0.3", "0.5", "0.7"):
            p = mpf(p_str)
            defect_at = lambda x: bernoulli_entropy(p) - bernoulli_entropy(x)
            for x_str in ("0.05", "0.2", "0.5", "0.9"):
                x = mpf(x_str)
                for l in range(0, 4):
                    bound = taylor_lower_bound(x, p, l)
                    assert defect_at(x) >= bound - eps_for(50)


class TestGammaBounds:
    def test_gamma_below_entropy_increment(self, dps50):
        # The truncation drops only even-order terms, whose Taylor
        # coefficients and central moments are both nonnegative, so each
        # Gamma_l(j) lower-bounds the j-th entropy increment.  (It is
        # not itself nonnegative: at skewed p and small j the odd terms
        # can dominate.)
        from discrete_epi.dist_core import binomial_entropy_chain

        for p_str in P_GRID:
            chain = binomial_entropy_chain(p_str, 31)
            for l in (1, 2, 3):
                for j in (1, 2, 7, 31):
                    increment = chain[j] - chain[j - 1]
                    assert gamma_l(j, p_str, l) <= increment + eps_for(50)

    def test_gamma_nonnegative_at_symmetric_p(self, dps50):
        # At p = 1/2 the odd moments vanish and every surviving term is
        # a product of nonnegative factors.
        for l in (1, 2, 3):
            for j in (1, 2, 7, 30):
                assert gamma_l(j, "0.5", l) >= -eps_for(50)

    def test_cumulative_below_entropy(self, dps50):
        for p_str in ("0.2", "0.5", "0.8"):
            for l in (1, 2, 3):
                for n in (1, 4, 20, 60):
                    bound = cumulative_gamma_bound(n, p_str, l)
                    exact = entropy(binomial_pmf(n, p_str))
                    assert bound <= exact + eps_for(50)


class TestHarmonicBound:
    def test_harmonic_numbers_exact(self, dps50):
        assert_close(harmonic_number(4, 1), mpf(25) / 12)
        assert_close(harmonic_number(4, 2), mpf(205) / 144)

    def test_c_coefficients(self, dps50):
        for p_str in P_GRID:
            p = mpf(p_str)
            pq = p * (1 - p)
            assert_close(c_coeff(1, p), mpf(1) / 2)
            assert_close(c_coeff(2, p), (1 - pq) / (12 * pq))

    def test_known_value_at_four_trials(self, dps50):
        assert_close(harmonic_lower_bound(4, "0.5", 2), mpf(805) / 576)

    def test_overshoot_region_documented(self, dps50):
        assert harmonic_bound_violations("0.5", 30, 2) == [1, 2, 3]

    def test_holds_from_four_onward(self, dps50):
        for n in range(4, 40):
            bound = harmonic_lower_bound(n, "0.5", 2)
            exact = entropy(binomial_pmf(n, "0.5"))
            assert bound <= exact + eps_for(50)
