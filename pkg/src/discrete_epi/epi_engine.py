"""Entropy power checks for sums of iid Bernoulli-type variables.

For independent X and Y, the entropy power inequality asks whether

    exp(2 H[X + Y])  >=  exp(2 H[X]) + exp(2 H[Y]).

For binomial sums with a common success probability it can fail at
small sizes (already at one summand each for p != 1/2) and holds from a
p-dependent threshold onward.  The workable sufficient condition is a
half-log step growth of the entropy along the iid-sum process:

    H[Binomial(n+1, p)] - H[Binomial(n, p)]  >=  (1/2) ln((n+1)/n),

because exp(2 H[Binomial(n, p)]) / n nondecreasing in n turns
super-additivity over sizes into the inequality itself.  This module
evaluates gaps, step margins, empirical thresholds, and the closed-form
threshold candidates

    ceil(111/25 t + 7)   and   ceil(t**2 + 117/50 t + 7),

both in the skew parameter t = omega(p); the exact rationals live in
:mod:`discrete_epi.polycert` next to the certificates that justify them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import mpmath
from mpmath import mpf

from .dist_core import (
    IntegerPmf,
    binomial_entropy_chain,
    binomial_pmf,
    convolve,
    entropy,
    iid_sum_pmf,
    omega,
)
from .polycert import QUAD_LINEAR_COEFF, THRESHOLD_SLOPE
from .precision import DEFAULT_PRECISION, RealLike, as_mpf, eps_for, working_precision

__all__ = [
    "EpiReport",
    "SemiAsymptoticCheck",
    "StepCheck",
    "ThresholdReport",
    "empirical_threshold",
    "epi_gap",
    "epi_grid_check",
    "formula_thresholds",
    "iid_epi_gap",
    "semi_asymptotic_condition",
    "sufficient_step_check",
    "zero_crossing_scan",
]


@dataclass(frozen=True)
class EpiReport:
    """Outcome of one entropy power comparison.

    gap = exp(2 H[sum]) - exp(2 H[X]) - exp(2 H[Y]); ``holds`` allows
    the usual eps slack so exact-zero cases do not flap on rounding.
    ``p`` is None for reports about a generic (non-binomial) base pmf.
    """

    m: int
    n: int
    p: Optional[mpf]
    gap: mpf
    holds: bool
    precision: int


class StepCheck(NamedTuple):
    holds: bool
    margin: mpf


class SemiAsymptoticCheck(NamedTuple):
    holds: bool
    lhs: mpf
    rhs: mpf


@dataclass(frozen=True)
class ThresholdReport:
    """Empirical and closed-form size thresholds for one p.

    ``empirical_n0`` is the smallest size from which the half-log step
    condition holds all the way to ``cap`` (None when even the cap
    fails); the two formula values are the closed-form candidates, valid
    whenever they evaluate to at least 7.
    """

    p: mpf
    t: mpf
    empirical_n0: Optional[int]
    formula_a: int
    formula_b: int
    cap: int
    precision: int


def _epi_gap_from_entropies(h_sum: mpf, h_x: mpf, h_y: mpf) -> mpf:
    return mpmath.exp(2 * h_sum) - mpmath.exp(2 * h_x) - mpmath.exp(2 * h_y)


def epi_gap(m: int, n: int, p: RealLike, precision: int = DEFAULT_PRECISION) -> EpiReport:
    """Entropy power gap for Binomial(m, p) + Binomial(n, p)."""
    if not isinstance(m, int) or m < 1 or not isinstance(n, int) or n < 1:
        raise ValueError(f"m and n must be positive integers, got {m!r}, {n!r}")
    pv = as_mpf(p, precision)
    chain = binomial_entropy_chain(pv, m + n, precision)
    with working_precision(precision):
        gap = _epi_gap_from_entropies(chain[m + n], chain[m], chain[n])
        holds = gap >= -eps_for(precision)
    return EpiReport(m=m, n=n, p=pv, gap=gap, holds=bool(holds), precision=precision)


def iid_epi_gap(base: IntegerPmf, m: int, n: int) -> EpiReport:
    """Entropy power gap for m and n iid copies of an arbitrary base pmf.

    A single-point base yields entropies zero and gap exactly -1, which
    is reported rather than rejected: it is the honest degenerate case.
    """
    if not isinstance(m, int) or m < 1 or not isinstance(n, int) or n < 1:
        raise ValueError(f"m and n must be positive integers, got {m!r}, {n!r}")
    precision = base.precision
    sum_m = iid_sum_pmf(base, m)
    sum_n = iid_sum_pmf(base, n)
    total = convolve(sum_m, sum_n)
    with working_precision(precision):
        gap = _epi_gap_from_entropies(entropy(total), entropy(sum_m), entropy(sum_n))
        holds = gap >= -eps_for(precision)
    return EpiReport(m=m, n=n, p=None, gap=gap, holds=bool(holds), precision=precision)


def _step_margin(h_next: mpf, h_cur: mpf, n: int) -> mpf:
    return h_next - h_cur - mpmath.ln(mpf(n + 1) / n) / 2


def sufficient_step_check(
    n: int, p: RealLike, precision: int = DEFAULT_PRECISION
) -> StepCheck:
    """Half-log step condition at size n; margin is the slack in nats."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    chain = binomial_entropy_chain(p, n + 1, precision)
    with working_precision(precision):
        margin = _step_margin(chain[n + 1], chain[n], n)
        return StepCheck(holds=bool(margin >= -eps_for(precision)), margin=margin)


def _step_margins(p: RealLike, cap: int, precision: int) -> List[mpf]:
    """Margins for n = 1 .. cap, as one entropy-chain pass."""
    chain = binomial_entropy_chain(p, cap + 1, precision)
    with working_precision(precision):
        return [_step_margin(chain[n + 1], chain[n], n) for n in range(1, cap + 1)]


def formula_thresholds(
    t: RealLike, precision: int = DEFAULT_PRECISION
) -> Tuple[int, int]:
    """Closed-form threshold candidates at skew t >= 0.

    Returns (ceil(111/25 t + 7), ceil(t**2 + 117/50 t + 7)).  The linear
    form wins for t <= ~1, the quadratic beyond.
    """
    tv = as_mpf(t, precision)
    with working_precision(precision):
        if not tv >= 0:
            raise ValueError(f"t must be nonnegative, got {tv}")
        a = as_mpf(THRESHOLD_SLOPE, precision) * tv + 7
        b = tv * tv + as_mpf(QUAD_LINEAR_COEFF, precision) * tv + 7
        return int(mpmath.ceil(a)), int(mpmath.ceil(b))


def empirical_threshold(
    p: RealLike, cap: int, precision: int = DEFAULT_PRECISION
) -> ThresholdReport:
    """Smallest size from which the step condition holds through cap.

    Scans every margin up to cap, so the result is exact relative to the
    scan horizon: a later re-failure beyond cap would be caught only by
    a larger cap.
    """
    if not isinstance(cap, int) or cap < 1:
        raise ValueError(f"cap must be a positive integer, got {cap!r}")
    pv = as_mpf(p, precision)
    t = omega(pv, precision)
    margins = _step_margins(pv, cap, precision)
    fa, fb = formula_thresholds(t, precision)
    with working_precision(precision):
        eps = eps_for(precision)
        last_bad = 0
        for n, margin in enumerate(margins, start=1):
            if margin < -eps:
                last_bad = n
        n0: Optional[int] = last_bad + 1 if last_bad < cap else None
    return ThresholdReport(
        p=pv, t=t, empirical_n0=n0, formula_a=fa, formula_b=fb, cap=cap,
        precision=precision,
    )


def zero_crossing_scan(
    p: RealLike, cap: int, precision: int = DEFAULT_PRECISION
) -> List[int]:
    """Sizes where the step margin strictly changes sign.

    Margins within eps of zero are treated as zero and never create a
    crossing by themselves; the returned n is the first size carrying
    the new sign.
    """
    if not isinstance(cap, int) or cap < 1:
        raise ValueError(f"cap must be a positive integer, got {cap!r}")
    margins = _step_margins(p, cap, precision)
    with working_precision(precision):
        eps = eps_for(precision)
        crossings = []
        last_sign = 0
        for n, margin in enumerate(margins, start=1):
            sign = 1 if margin > eps else (-1 if margin < -eps else 0)
            if sign != 0:
                if last_sign != 0 and sign != last_sign:
                    crossings.append(n)
                last_sign = sign
    return crossings


def epi_grid_check(
    m_max: int, n_max: int, p: RealLike, precision: int = DEFAULT_PRECISION
) -> Dict[Tuple[int, int], EpiReport]:
    """Entropy power reports for every 1 <= m <= m_max, 1 <= n <= n_max."""
    if not isinstance(m_max, int) or m_max < 1 or not isinstance(n_max, int) or n_max < 1:
        raise ValueError(f"grid bounds must be positive integers, got {m_max!r}, {n_max!r}")
    pv = as_mpf(p, precision)
    chain = binomial_entropy_chain(pv, m_max + n_max, precision)
    out: Dict[Tuple[int, int], EpiReport] = {}
    with working_precision(precision):
        eps = eps_for(precision)
        powers = [mpmath.exp(2 * h) for h in chain]
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                gap = powers[m + n] - powers[m] - powers[n]
                out[(m, n)] = EpiReport(
                    m=m, n=n, p=pv, gap=gap, holds=bool(gap >= -eps),
                    precision=precision,
                )
    return out


def semi_asymptotic_condition(
    m: int, p: RealLike, precision: int = DEFAULT_PRECISION
) -> SemiAsymptoticCheck:
    """Gaussian-entropy comparison H[Binomial(m, p)] <= (1/2) ln(2 pi e m p q).

    The right side is the differential entropy of the moment-matched
    Gaussian; once it dominates, half-log step growth from m onward is
    enough to give the inequality against any larger partner size.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    pv = as_mpf(p, precision)
    with working_precision(precision):
        if not (0 < pv < 1):
            raise ValueError(f"p must lie strictly in (0, 1), got {pv}")
        lhs = entropy(binomial_pmf(m, pv, precision))
        rhs = mpmath.ln(2 * mpmath.pi * mpmath.e * m * pv * (1 - pv)) / 2
        return SemiAsymptoticCheck(holds=bool(lhs <= rhs + eps_for(precision)), lhs=lhs, rhs=rhs)
