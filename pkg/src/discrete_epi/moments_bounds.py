"""Central moments, cumulants, and entropy lower bounds for binomial sums.

The entropy increment of an iid-sum process admits a lower bound by
Taylor-expanding the binary-entropy defect around the success
probability p:

    H(X_(j)) - H(X_(j-1))  >=  Gamma_l(j)
                            =  sum_{k=1}^{2l+1} F_k(p) j**-k mu_k(j),

where mu_k(j) is the k-th central moment of Binomial(j, p), F_1(x) =
ln x - ln(1-x), and for k >= 2

    F_k(x) = [ (1-x)**-(k-1) + (-1)**k x**-(k-1) ] / (k (k-1)).

Even-order F_k are nonnegative, which is what makes truncation after an
odd order a valid lower bound.  Summing Gamma_l telescopes into a bound
on H itself, and expanding mu_k(j) in powers of j turns the sum into
generalised harmonic numbers with coefficients c(w):

    H(X_(n))  ~  sum_w c(w) H_n^(w),   c(1) = 1/2,
    c(2) = (1 - p(1-p)) / (12 p(1-p)).

The harmonic form drops remainder terms, so it is only trustworthy
where the direct cumulative bound confirms it; the helper
``harmonic_bound_violations`` reports the region empirically.

Closed forms for mu_2 .. mu_7 are hard-coded below and cross-checked
term by term against the direct sums in the test suite.  Moments of
arbitrary order come from the block-partition expansion over cumulants
(``faa_di_bruno_poly``), which expresses mu_k(j) as a polynomial in j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import mpmath
from mpmath import mpf

from .dist_core import IntegerPmf, binomial_entropy_chain, binomial_pmf, mean as pmf_mean
from .precision import DEFAULT_PRECISION, RealLike, as_mpf, eps_for, working_precision

__all__ = [
    "CumulantSet",
    "MomentPolynomial",
    "bernoulli_cumulants",
    "c_coeff",
    "central_moment_brute",
    "central_moment_closed",
    "cumulants_from_raw_moments",
    "cumulative_gamma_bound",
    "faa_di_bruno_poly",
    "gamma_l",
    "harmonic_lower_bound",
    "harmonic_number",
    "harmonic_bound_violations",
    "taylor_coeff",
    "taylor_lower_bound",
]


@dataclass(frozen=True)
class CumulantSet:
    """Cumulants kappa_1 .. kappa_K of a distribution, 1-indexed."""

    kappas: Tuple[mpf, ...]
    precision: int

    @property
    def order(self) -> int:
        return len(self.kappas)

    def kappa(self, g: int) -> mpf:
        if not 1 <= g <= self.order:
            raise ValueError(f"cumulant order {g} outside 1..{self.order}")
        return self.kappas[g - 1]


def cumulants_from_raw_moments(
    moments: List[RealLike], precision: int = DEFAULT_PRECISION
) -> CumulantSet:
    """Cumulants from raw moments m_1 .. m_K via the standard recurrence

        kappa_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j m_{n-j}.
    """
    with working_precision(precision):
        m = [as_mpf(x, precision) for x in moments]
        kappas: List[mpf] = []
        for n in range(1, len(m) + 1):
            acc = m[n - 1]
            for j in range(1, n):
                acc -= math.comb(n - 1, j - 1) * kappas[j - 1] * m[n - j - 1]
            kappas.append(acc)
    return CumulantSet(kappas=tuple(kappas), precision=precision)


def bernoulli_cumulants(
    p: RealLike, max_order: int, precision: int = DEFAULT_PRECISION
) -> CumulantSet:
    """Cumulants of a single Bernoulli(p) draw; every raw moment equals p."""
    if not isinstance(max_order, int) or max_order < 1:
        raise ValueError(f"max_order must be a positive integer, got {max_order!r}")
    pv = as_mpf(p, precision)
    with working_precision(precision):
        if not (0 <= pv <= 1):
            raise ValueError(f"p must lie in [0, 1], got {pv}")
    return cumulants_from_raw_moments([pv] * max_order, precision)


def central_moment_brute(
    pmf: IntegerPmf, k: int, mean: Optional[RealLike] = None
) -> mpf:
    """k-th central moment by direct summation over the support."""
    if not isinstance(k, int) or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    with working_precision(pmf.precision):
        mu = as_mpf(mean, pmf.precision) if mean is not None else pmf_mean(pmf)
        return mpmath.fsum(w * (i - mu) ** k for i, w in pmf.items() if w > 0)


def central_moment_closed(
    n: int, p: RealLike, k: int, precision: int = DEFAULT_PRECISION
) -> mpf:
    """Closed-form k-th central moment of Binomial(n, p) for k <= 7.

    Written in r = p - 1/2 and u = 1 - 4 r**2 = 4 p (1-p); odd orders
    carry a single factor of r.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    if not isinstance(k, int) or not 0 <= k <= 7:
        raise ValueError(f"closed forms cover k in 0..7, got {k!r}")
    pv = as_mpf(p, precision)
    with working_precision(precision):
        if not (0 <= pv <= 1):
            raise ValueError(f"p must lie in [0, 1], got {pv}")
        r = pv - mpf(1) / 2
        r2 = r * r
        r4 = r2 * r2
        u = 1 - 4 * r2
        if k == 0:
            return mpf(1)
        if k == 1:
            return mpf(0)
        if k == 2:
            return n * u / 4
        if k == 3:
            return -n * r * u / 2
        if k == 4:
            return n * u * (-2 + 24 * r2 + 3 * n * u) / 16
        if k == 5:
            return -n * r * u * (-4 + 24 * r2 + 5 * n * u) / 4
        if k == 6:
            return (
                n
                * u
                * (
                    15 * n**2 * u**2
                    + 16 * (1 - 30 * r2 + 120 * r4)
                    - 10 * n * (3 - 64 * r2 + 208 * r4)
                )
                / 64
            )
        return (
            -n
            * r
            * u
            * (
                105 * n**2 * u**2
                - 14 * n * (17 - 200 * r2 + 528 * r4)
                + 8 * (17 - 240 * r2 + 720 * r4)
            )
            / 32
        )


def _partitions_min2(k: int, max_part: Optional[int] = None) -> Iterator[Dict[int, int]]:
    """Integer partitions of k into parts >= 2, as {part: multiplicity}."""
    if max_part is None:
        max_part = k
    if k == 0:
        yield {}
        return
    for g in range(min(k, max_part), 1, -1):
        for i in range(1, k // g + 1):
            for rest in _partitions_min2(k - g * i, g - 1):
                out = {g: i}
                out.update(rest)
                yield out


def _partition_weight(k: int, parts: Dict[int, int]) -> int:
    """Number of set partitions of k elements with the given block sizes."""
    w = math.factorial(k)
    for g, i in parts.items():
        w //= math.factorial(i) * math.factorial(g) ** i
    return w


@dataclass(frozen=True)
class MomentPolynomial:
    """Central moment of a j-fold iid sum as a polynomial in j.

    coeffs maps the power of j to its coefficient; evaluating at j gives
    mu_k of the sum of j iid copies of the base distribution.
    """

    k: int
    coeffs: Dict[int, mpf]
    precision: int

    def evaluate(self, j: int) -> mpf:
        with working_precision(self.precision):
            return mpmath.fsum(c * mpf(j) ** e for e, c in sorted(self.coeffs.items()))


def faa_di_bruno_poly(k: int, cumulants: CumulantSet) -> MomentPolynomial:
    """Block-partition expansion of the k-th central moment of an iid sum.

    Every set partition of k items into blocks of size >= 2 contributes
    the product of block cumulants; blocks of size one are absent
    because central moments are cumulants of the centred variable.  For
    a j-fold sum each cumulant scales by j, so a partition with b blocks
    lands in the j**b coefficient:

        mu_k(j) = sum_partitions  k! / prod_a (i_a! (g_a!)**i_a)
                                  * prod_a kappa_{g_a}**i_a * j**(sum_a i_a).
    """
    if not isinstance(k, int) or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    if k >= 2 and cumulants.order < k:
        raise ValueError(
            f"need cumulants up to order {k}, got only {cumulants.order}"
        )
    precision = cumulants.precision
    coeffs: Dict[int, mpf] = {}
    with working_precision(precision):
        if k == 0:
            coeffs[0] = mpf(1)
        for parts in _partitions_min2(k):
            if not parts:
                continue
            term = mpf(_partition_weight(k, parts))
            for g, i in parts.items():
                term *= cumulants.kappa(g) ** i
            b = sum(parts.values())
            coeffs[b] = coeffs.get(b, mpf(0)) + term
    return MomentPolynomial(k=k, coeffs=coeffs, precision=precision)


def taylor_coeff(k: int, x: RealLike, precision: int = DEFAULT_PRECISION) -> mpf:
    """k-th Taylor coefficient F_k(x) of the binary-entropy defect.

    F_1(x) = ln x - ln(1-x); for k >= 2,
    F_k(x) = [ (1-x)**-(k-1) + (-1)**k x**-(k-1) ] / (k (k-1)).
    Even orders are nonnegative on (0, 1).
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    xv = as_mpf(x, precision)
    with working_precision(precision):
        if not (0 < xv < 1):
            raise ValueError(f"x must lie strictly in (0, 1), got {xv}")
        y = 1 - xv
        if k == 1:
            return mpmath.ln(xv) - mpmath.ln(y)
        sign = 1 if k % 2 == 0 else -1
        return (y ** (-(k - 1)) + sign * xv ** (-(k - 1))) / (k * (k - 1))


def taylor_lower_bound(
    x: RealLike, p: RealLike, l: int, precision: int = DEFAULT_PRECISION
) -> mpf:
    """Odd-truncated Taylor polynomial of H(p) - H(x) around p.

    sum_{k=1}^{2l+1} F_k(p) (x - p)**k; a pointwise lower bound for the
    defect because the omitted even tail has nonnegative coefficients.
    """
    if not isinstance(l, int) or l < 0:
        raise ValueError(f"l must be a nonnegative integer, got {l!r}")
    xv = as_mpf(x, precision)
    pv = as_mpf(p, precision)
    with working_precision(precision):
        d = xv - pv
        acc = mpf(0)
        power = mpf(1)
        for k in range(1, 2 * l + 2):
            power *= d
            acc += taylor_coeff(k, pv, precision) * power
        return acc


def _binomial_central_moment(
    j: int, p: RealLike, k: int, precision: int
) -> mpf:
    if k <= 7:
        return central_moment_closed(j, p, k, precision)
    return central_moment_brute(binomial_pmf(j, p, precision), k)


def gamma_l(j: int, p: RealLike, l: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """Entropy-increment lower bound Gamma_l(j) at truncation depth l.

    sum_{k=2}^{2l+1} F_k(p) j**-k mu_k(j); the k = 1 term vanishes with
    the first central moment.  Closed-form moments serve k <= 7, direct
    summation beyond.
    """
    if not isinstance(j, int) or j < 1:
        raise ValueError(f"j must be a positive integer, got {j!r}")
    if not isinstance(l, int) or l < 1:
        raise ValueError(f"l must be a positive integer, got {l!r}")
    pv = as_mpf(p, precision)
    with working_precision(precision):
        jv = mpf(j)
        acc = mpf(0)
        for k in range(2, 2 * l + 2):
            acc += (
                taylor_coeff(k, pv, precision)
                * jv ** (-k)
                * _binomial_central_moment(j, pv, k, precision)
            )
        return acc


def c_coeff(w: int, p: RealLike, precision: int = DEFAULT_PRECISION) -> mpf:
    """Coefficient c(w) of the generalised harmonic number H_n^(w).

    Collects, across Taylor orders k = 2 .. 2w, every block partition
    whose excess sum_a i_a (g_a - 1) equals w; each contributes its
    partition weight times the product of Bernoulli cumulants times
    F_k(p).  c(1) = 1/2 for every p; c(2) = (1 - p(1-p))/(12 p(1-p)).
    """
    if not isinstance(w, int) or w < 1:
        raise ValueError(f"w must be a positive integer, got {w!r}")
    pv = as_mpf(p, precision)
    cums = bernoulli_cumulants(pv, 2 * w, precision)
    with working_precision(precision):
        acc = mpf(0)
        for k in range(2, 2 * w + 1):
            fk = taylor_coeff(k, pv, precision)
            for parts in _partitions_min2(k):
                if not parts:
                    continue
                excess = sum(i * (g - 1) for g, i in parts.items())
                if excess != w:
                    continue
                term = mpf(_partition_weight(k, parts))
                for g, i in parts.items():
                    term *= cums.kappa(g) ** i
                acc += term * fk
        return acc


def harmonic_number(n: int, w: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """Generalised harmonic number H_n^(w) = sum_{i<=n} i**-w."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    if not isinstance(w, int) or w < 1:
        raise ValueError(f"w must be a positive integer, got {w!r}")
    with working_precision(precision):
        return mpmath.fsum(mpf(i) ** (-w) for i in range(1, n + 1))


def harmonic_lower_bound(
    n: int, p: RealLike, bound_order: int, precision: int = DEFAULT_PRECISION
) -> mpf:
    """Harmonic-series entropy approximant sum_{w<=W} c(w) H_n^(w).

    Not a certified bound for small n: the expansion drops remainder
    terms, and at p = 1/2 it overshoots the exact entropy for n <= 3.
    Use ``harmonic_bound_violations`` to map the trustworthy region.
    """
    if not isinstance(bound_order, int) or bound_order < 1:
        raise ValueError(f"bound_order must be a positive integer, got {bound_order!r}")
    with working_precision(precision):
        return mpmath.fsum(
            c_coeff(w, p, precision) * harmonic_number(n, w, precision)
            for w in range(1, bound_order + 1)
        )


def cumulative_gamma_bound(
    n: int, p: RealLike, l: int, precision: int = DEFAULT_PRECISION
) -> mpf:
    """Telescoped increment bound sum_{j=1}^{n} Gamma_l(j) <= H[Binomial(n, p)].

    Valid for every n and l because each increment bound is valid.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    with working_precision(precision):
        return mpmath.fsum(gamma_l(j, p, l, precision) for j in range(1, n + 1))


def harmonic_bound_violations(
    p: RealLike,
    n_max: int,
    bound_order: int,
    precision: int = DEFAULT_PRECISION,
) -> List[int]:
    """All n <= n_max where the harmonic approximant exceeds the entropy.

    Comparison uses the standard eps slack, so only genuine overshoots
    are reported.
    """
    chain = binomial_entropy_chain(p, n_max, precision)
    eps = eps_for(precision)
    out = []
    with working_precision(precision):
        for n in range(1, n_max + 1):
            if harmonic_lower_bound(n, p, bound_order, precision) > chain[n] + eps:
                out.append(n)
    return out
