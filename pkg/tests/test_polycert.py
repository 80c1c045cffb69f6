"""Exact-rational polynomial engine and positivity-certificate tests."""

from fractions import Fraction

import pytest
from mpmath import mpf

from discrete_epi.errors import ConsistencyError
from discrete_epi.moments_bounds import central_moment_closed, taylor_coeff
from discrete_epi.polycert import (
    CERT_SUBSTITUTIONS,
    BivarPoly,
    FactorExponents,
    RationalExpr,
    build_g,
    certify,
    f_exact,
    quadratic_shift_expand,
    rational_substitute_t,
    shift_expand,
    symbolic_f,
    symbolic_moments,
    symbolic_taylor_coeff,
)

from conftest import exact_central_moment, skew_parameter

NT = ("n", "t")

# Denominator-cleared slack polynomial, frozen coefficient-for-coefficient.
# Keys are (n-degree, t-degree).
G_FIXTURE = {
    (7, 1): Fraction(35),
    (6, 2): Fraction(35),
    (6, 1): Fraction(315),
    (6, 0): Fraction(70),
    (5, 3): Fraction(-721),
    (5, 2): Fraction(-3339),
    (5, 1): Fraction(-2989),
    (5, 0): Fraction(-315),
    (4, 4): Fraction(-546),
    (4, 3): Fraction(-1568),
    (4, 2): Fraction(371),
    (4, 1): Fraction(721),
    (4, 0): Fraction(-826),
    (3, 5): Fraction(-10),
    (3, 4): Fraction(-66),
    (3, 3): Fraction(-157),
    (3, 2): Fraction(-135),
    (3, 1): Fraction(-90),
    (3, 0): Fraction(-826),
    (2, 0): Fraction(-630),
    (1, 0): Fraction(-315),
    (0, 0): Fraction(-70),
}

# Rounded rows of the linear-substitution expansion, as published; each
# entry is (t-degree, printed value, scale).  agreement is checked to one
# unit in the last printed decimal, which covers rounding and truncation.
A_ROUNDED_ROWS = {
    7: [(1, "35", 1)],
    6: [(2, "1122.8", 1), (1, "2030", 1), (0, "70", 1)],
    5: [(3, "14700.90", 1), (2, "52210.20", 1), (1, "48120.80", 1), (0, "2625", 1)],
    4: [(4, "1.01", 10**5), (3, "5.32", 10**5), (2, "9.57", 10**5),
        (1, "6.06", 10**5), (0, "0.40", 10**5)],
    3: [(5, "3.85", 10**5), (4, "26.94", 10**5), (3, "72.32", 10**5),
        (2, "88.61", 10**5), (1, "43.61", 10**5), (0, "3.02", 10**5)],
    2: [(6, "7.76", 10**5), (5, "68.23", 10**5), (4, "247.042", 10**5),
        (3, "456.97", 10**5), (2, "433.17", 10**5), (1, "176.77", 10**5),
        (0, "11.80", 10**5)],
    1: [(7, "6.47", 10**5), (6, "70.91", 10**5), (5, "338.88", 10**5),
        (4, "880.98", 10**5), (3, "1297.85", 10**5), (2, "1030.51", 10**5),
        (1, "361.59", 10**5), (0, "20.14", 10**5)],
    0: [(8, "0.15", 10**4), (7, "56.29", 10**4), (6, "709.80", 10**4),
        (5, "3485.03", 10**4), (4, "8728.40", 10**4), (3, "11955.74", 10**4),
        (2, "8613.06", 10**4), (1, "2628.77", 10**4), (0, "64.15", 10**4)],
}


def decimal_places(text: str) -> int:
    return len(text.split(".")[1]) if "." in text else 0


class TestBivarPoly:
    def test_square_expansion(self):
        n_plus_t = BivarPoly.from_terms(NT, {(1, 0): 1, (0, 1): 1})
        sq = n_plus_t * n_plus_t
        assert sq.coeffs == {(2, 0): Fraction(1), (1, 1): Fraction(2), (0, 2): Fraction(1)}
        assert sq == n_plus_t.power(2)

    def test_power_matches_repeated_product(self):
        base = BivarPoly.from_terms(NT, {(1, 1): 2, (0, 0): Fraction(-1, 3)})
        by_products = BivarPoly.constant(NT, 1)
        for _ in range(5):
            by_products = by_products * base
        assert base.power(5) == by_products
        with pytest.raises(ValueError):
            base.power(-1)

    def test_evaluate(self):
        poly = BivarPoly.from_terms(NT, {(2, 1): 3, (0, 0): -7})
        assert poly.evaluate(Fraction(1, 2), 4) == 3 * Fraction(1, 4) * 4 - 7

    def test_compose_first(self):
        poly = BivarPoly.from_terms(NT, {(2, 0): 1, (0, 1): 1})
        repl = BivarPoly.from_terms(("m", "t"), {(1, 0): 1, (0, 0): 3})
        composed = poly.compose_first(repl, ("m", "t"))
        for m in (0, 1, Fraction(5, 2)):
            for t in (0, Fraction(1, 3)):
                assert composed.evaluate(m, t) == (m + 3) ** 2 + t

    def test_variable_mismatch_rejected(self):
        a = BivarPoly.constant(NT, 1)
        b = BivarPoly.constant(("m", "t"), 1)
        with pytest.raises(ValueError):
            a + b
        with pytest.raises(ValueError):
            a * b

    def test_zero_handling(self):
        z = BivarPoly.zero(NT)
        assert z.is_zero()
        assert z.degree(0) == -1
        built = BivarPoly.from_terms(NT, {(1, 1): 1}) - BivarPoly.from_terms(NT, {(1, 1): 1})
        assert built.is_zero()
        assert str(z) == "0"

    def test_sorted_terms_ordering(self):
        poly = BivarPoly.from_terms(NT, {(0, 2): 1, (2, 0): 1, (2, 3): 1, (1, 0): 1})
        order = [(i, j) for i, j, _ in poly.sorted_terms()]
        assert order == [(2, 0), (2, 3), (1, 0), (0, 2)]


class TestRationalExpr:
    def test_reduction_clears_exact_factors(self):
        # (n**2 + n) / n normalises to the polynomial n + 1.
        num = BivarPoly.from_terms(NT, {(2, 0): 1, (1, 0): 1})
        expr = RationalExpr.from_poly(num, n=1)
        assert expr.den == FactorExponents()
        assert expr.num.coeffs == {(1, 0): Fraction(1), (0, 0): Fraction(1)}

    def test_parity_mismatch_on_add(self):
        even = RationalExpr(BivarPoly.constant(NT, 1))
        odd = RationalExpr(BivarPoly.constant(NT, 1), parity=1)
        with pytest.raises(ConsistencyError):
            even + odd

    def test_odd_parity_refuses_evaluation(self):
        odd = RationalExpr(BivarPoly.constant(NT, 1), parity=1)
        with pytest.raises(ConsistencyError):
            odd.evaluate(1, 1)

    def test_odd_times_odd_folds_to_skew(self):
        # r * r must equal t / (4 (t + 4)); at p = 3/10, r**2 = 1/25.
        r = RationalExpr(BivarPoly.constant(NT, 1), parity=1)
        square = r * r
        assert square.parity == 0
        t = skew_parameter(Fraction(3, 10))
        assert square.evaluate(9, t) == Fraction(1, 25)

    def test_evaluate_exact(self):
        num = BivarPoly.from_terms(NT, {(1, 0): 1})
        expr = RationalExpr.from_poly(num, n1=1)  # n / (n + 1)
        assert expr.evaluate(3, 0) == Fraction(3, 4)


class TestSymbolicMoments:
    P = Fraction(3, 10)

    def test_first_moment_vanishes(self):
        assert symbolic_moments(1).num.is_zero()

    @pytest.mark.parametrize("k", [2, 4, 6])
    def test_even_orders_match_exact(self, k):
        t = skew_parameter(self.P)
        for n in (1, 2, 5, 17):
            assert symbolic_moments(k).evaluate(n, t) == exact_central_moment(n, self.P, k)

    @pytest.mark.parametrize("k", [3, 5, 7])
    def test_odd_orders_match_exact_squared(self, k):
        # Odd moments carry one dangling factor of r; the square has even
        # parity and can be evaluated exactly.
        t = skew_parameter(self.P)
        mu = symbolic_moments(k)
        assert mu.parity == 1
        squared = mu * mu
        for n in (1, 2, 5, 17):
            assert squared.evaluate(n, t) == exact_central_moment(n, self.P, k) ** 2

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            symbolic_moments(8)
        with pytest.raises(ValueError):
            symbolic_moments(0)


class TestSymbolicTaylorCoeff:
    def test_second_coefficient(self):
        p = Fraction(3, 10)
        t = skew_parameter(p)
        expected = 1 / (2 * p * (1 - p))
        assert symbolic_taylor_coeff(2).evaluate(0, t) == expected

    def test_fourth_at_symmetric_point(self):
        assert symbolic_taylor_coeff(4).evaluate(0, 0) == Fraction(4, 3)

    def test_third_squared_at_quarter(self):
        coeff = symbolic_taylor_coeff(3)
        assert coeff.parity == 1
        t = skew_parameter(Fraction(1, 4))
        assert t == Fraction(4, 3)
        assert (coeff * coeff).evaluate(0, t) == Fraction(64, 27) ** 2

    def test_rejects_low_order(self):
        with pytest.raises(ValueError):
            symbolic_taylor_coeff(1)


class TestSlackExpression:
    def test_shape(self):
        f = symbolic_f()
        assert f.parity == 0
        assert f.den.t4 == 0 and f.den.t1 == 0
        assert f.den.n <= 3 and f.den.n1 <= 6

    def test_known_exact_value(self):
        assert f_exact(7, 0) == Fraction(179, 10536960)

    def test_numeric_route_agrees(self, dps50):
        # Independent numeric route: Taylor coefficients times closed-form
        # central moments at n+1 trials, minus the half-log tail.
        p, n = "0.3", 9
        total = mpf(0)
        for k in range(2, 8):
            total += (
                taylor_coeff(k, p)
                * central_moment_closed(n + 1, p, k)
                / mpf(n + 1) ** k
            )
        nn = mpf(n)
        total -= 1 / (2 * nn) - 1 / (4 * nn**2) + 1 / (6 * nn**3)
        t = skew_parameter(Fraction(3, 10))
        exact = f_exact(n, t)
        assert abs(total - mpf(exact.numerator) / exact.denominator) < mpf("1e-40")


class TestBuildG:
    def test_matches_frozen_coefficients(self):
        assert build_g().coeffs == G_FIXTURE

    def test_sign_change_between_six_and_seven(self):
        g = build_g()
        assert g.evaluate(7, 0) == 641536
        assert g.evaluate(6, 0) == -457072

    def test_clearing_identity(self):
        g = build_g()
        for n, t in ((5, Fraction(7, 3)), (11, Fraction(1, 2))):
            cleared = f_exact(n, t) * 420 * Fraction(n + 1) ** 6 * Fraction(n) ** 3
            assert g.evaluate(n, t) == cleared


class TestSubstitutions:
    def test_identity_shift(self):
        shifted = shift_expand(build_g(), 0, 0)
        assert shifted.vars == ("m", "t")
        assert shifted.coeffs == build_g().coeffs

    def test_linear_shift_evaluates_consistently(self):
        g = build_g()
        slope, intercept = Fraction(111, 25), 7
        shifted = shift_expand(g, slope, intercept)
        for m, t in ((0, 0), (Fraction(1, 2), 3), (2, Fraction(5, 7))):
            assert shifted.evaluate(m, t) == g.evaluate(slope * t + intercept + m, t)

    def test_quadratic_shift_evaluates_consistently(self):
        g = build_g()
        quad, slope, intercept = 1, Fraction(117, 50), 7
        shifted = quadratic_shift_expand(g, quad, slope, intercept)
        for m, t in ((0, 1), (Fraction(3, 2), Fraction(2, 3))):
            n = quad * t**2 + slope * t + intercept + m
            assert shifted.evaluate(m, t) == g.evaluate(n, t)

    def test_rational_substitution_clears_denominator(self):
        g = build_g()
        cleared = rational_substitute_t(7)
        top = shift_expand(g, 0, 7).degree(1)
        assert top == 5
        for m, t in ((0, 1), (1, Fraction(1, 3)), (Fraction(2, 5), 4)):
            image = Fraction(t) / (4 * (1 + Fraction(t)))
            expected = g.evaluate(7 + Fraction(m), image) * 4**top * (1 + Fraction(t)) ** top
            assert cleared.evaluate(m, t) == expected


class TestCertificates:
    def test_production_substitutions_all_nonnegative(self):
        for sub_id in ("A", "Aprime", "B", "C"):
            report = certify(sub_id)
            assert report.all_nonneg, sub_id
            assert report.min_coefficient > 0

    def test_margin_locations(self):
        assert certify("A").min_coefficient == 35
        assert certify("Aprime").min_coefficient == 35
        assert certify("B").min_coefficient == 35
        assert certify("C").min_coefficient == 8960

    def test_control_substitution_fails(self):
        report = certify("control")
        assert not report.all_nonneg
        assert report.min_coefficient == -163154

    def test_sixth_power_row_exact(self):
        poly = certify("A").polynomial
        row = {j: c for (i, j), c in poly.coeffs.items() if i == 6}
        assert row == {2: Fraction(5614, 5), 1: Fraction(2030), 0: Fraction(70)}

    def test_rounded_rows_match_published_display(self):
        poly = certify("A").polynomial
        degrees = {i for i, _ in poly.coeffs}
        assert degrees == set(A_ROUNDED_ROWS)
        for m_deg, entries in A_ROUNDED_ROWS.items():
            row = {j: c for (i, j), c in poly.coeffs.items() if i == m_deg}
            assert set(row) == {j for j, _, _ in entries}
            for t_deg, printed, scale in entries:
                actual = row[t_deg] / scale
                ulp = Fraction(1, 10 ** decimal_places(printed))
                assert abs(actual - Fraction(printed)) <= ulp, (m_deg, t_deg)

    def test_json_payload(self):
        payload = certify("A").to_json_dict()
        assert set(payload) == {
            "substitution", "coefficients", "min_coefficient", "all_nonneg",
        }
        assert payload["substitution"] == "A"
        assert payload["all_nonneg"] is True
        assert payload["min_coefficient"] == "35/1"
        assert payload["coefficients"][0] == [7, 1, "35/1"]
        keys = [(i, j) for i, j, _ in payload["coefficients"]]
        assert keys == sorted(keys, key=lambda e: (-e[0], e[1]))

    def test_unknown_substitution_rejected(self):
        with pytest.raises(ValueError):
            certify("Z")
        assert set(CERT_SUBSTITUTIONS) == {"A", "Aprime", "B", "C", "control"}
