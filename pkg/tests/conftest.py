"""Shared test helpers: high-precision comparison and exact oracles."""

from fractions import Fraction
from math import comb
from typing import List

import mpmath
import pytest

from discrete_epi.precision import working_precision


@pytest.fixture
def dps50():
    """Run the test body at 50 working digits."""
    with working_precision(50):
        yield 50


def assert_close(actual, expected, tol="1e-40"):
    """Absolute-difference assertion evaluated in mpf arithmetic."""
    diff = abs(mpmath.mpf(actual) - mpmath.mpf(expected))
    bound = mpmath.mpf(tol)
    assert diff <= bound, f"|{actual} - {expected}| = {diff} > {bound}"


def exact_binomial_weights(n: int, p: Fraction) -> List[Fraction]:
    """Binomial(n, p) weights in exact rational arithmetic."""
    q = 1 - p
    return [comb(n, k) * p**k * q ** (n - k) for k in range(n + 1)]


def exact_central_moment(n: int, p: Fraction, k: int) -> Fraction:
    """k-th central moment of Binomial(n, p), exact."""
    weights = exact_binomial_weights(n, p)
    mean = n * p
    return sum(w * (Fraction(i) - mean) ** k for i, w in enumerate(weights))


def skew_parameter(p: Fraction) -> Fraction:
    """The squared-skewness reparametrisation (2p-1)**2 / (p(1-p))."""
    return (2 * p - 1) ** 2 / (p * (1 - p))
