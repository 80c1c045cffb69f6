"""Large-n entropy corrections and Gaussian-smoothed comparisons.

Two empirical instruments live here:

* The lattice correction g(n) = H(X^(n)) - (1/2) ln(2 pi e n sigma**2)
  for the n-fold iid sum X^(n) of an integer-valued base distribution,
  computed exactly and compared against its predicted leading decay:
  -kappa_3**2 / (12 sigma**6 n) when the third cumulant survives, and
  -kappa_{N+1}**2 / (2 (N+1)! sigma**(2N+2)) * n**(1-N) when cumulants
  3..N vanish (so a symmetric base decays like 1/n**2).  Only leading
  constants, fully determined by cumulants, are ever asserted; deeper
  expansion coefficients are treated as fitted residuals.

* The differential entropy h(S) of a lattice distribution smoothed by a
  Gaussian, evaluated by deterministic adaptive quadrature.  This feeds
  the continuous entropy-power comparison: half-log increments of
  h(S^(n)) hold unconditionally, and the discrete inequality upgrades
  them to full-log increments once n clears the empirical threshold.

Quadrature design: the mixture density with standard deviation sigma
much below the lattice spacing is a row of near-disjoint peaks, so the
integration region [min - 8 sigma, max + 8 sigma] is pre-split at
k +- min(40 sigma, 1/2) around every support point, then each panel is
refined by bisection under a fixed Gauss-Legendre rule until the local
defect fits a width-proportional share of the requested tolerance.
Every accepted defect is accumulated, so the reported quadrature error
is a true bound on the acceptance slack and never exceeds the request.
A density evaluation sums only peaks within 40 sigma (beyond that a
peak's contribution is below any working precision used here).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mpf

from .dist_core import IntegerPmf, convolve, entropy
from .errors import QuadratureError
from .moments_bounds import CumulantSet, cumulants_from_raw_moments
from .precision import (
    DEFAULT_PRECISION,
    RealLike,
    as_mpf,
    eps_for,
    working_precision,
)

__all__ = [
    "KnesslProfile",
    "LeadingFit",
    "SmoothedEntropy",
    "TulinoRow",
    "gaussian_smoothed_entropy",
    "iid_power_pmfs",
    "knessl_g",
    "knessl_profile",
    "leading_constant_fit",
    "tulino_verdu_compare",
]

QUADRATURE_ORDER = 12
MAX_BISECTION_DEPTH = 48
DENSITY_WINDOW_SIGMAS = 40
REGION_PAD_SIGMAS = 8
MAX_SUM_SUPPORT = 1 << 22

_CUMULANT_ORDERS = 8


# ---------------------------------------------------------------------------
# Exact iid-power entropies
# ---------------------------------------------------------------------------

def iid_power_pmfs(
    base: IntegerPmf, n_values: Iterable[int]
) -> Dict[int, IntegerPmf]:
    """Distributions of the n-fold iid sum for every requested n.

    Binary decomposition over a shared ladder of repeated squarings, so
    a geometric family like {512, 1024, 2048, 4096} costs one chain.
    """
    targets = sorted(set(n_values))
    if not targets:
        return {}
    if targets[0] < 1:
        raise ValueError(f"fold counts must be >= 1, got {targets[0]}")
    top = targets[-1]
    if (base.size - 1) * top + 1 > MAX_SUM_SUPPORT:
        raise ValueError(
            f"n={top} puts the sum support past the {MAX_SUM_SUPPORT}-point budget"
        )
    ladder = [base]
    while (1 << len(ladder)) <= top:
        ladder.append(convolve(ladder[-1], ladder[-1]))
    out: Dict[int, IntegerPmf] = {}
    for n in targets:
        acc: Optional[IntegerPmf] = None
        remaining = n
        rung = 0
        while remaining:
            if remaining & 1:
                acc = ladder[rung] if acc is None else convolve(acc, ladder[rung])
            remaining >>= 1
            rung += 1
        assert acc is not None
        out[n] = acc
    return out


def _gaussian_reference(n: int, sigma2: mpf) -> mpf:
    return mpmath.ln(2 * mpmath.pi * mpmath.e * n * sigma2) / 2


def knessl_g(
    base: IntegerPmf, n: int, precision: int = DEFAULT_PRECISION
) -> mpf:
    """Exact entropy of the n-fold sum minus the Gaussian reference.

    g(n) = H(X^(n)) - (1/2) ln(2 pi e n sigma**2) with sigma**2 the base
    variance; negative once the sum is close enough to its Gaussian
    limit, and decaying at a cumulant-determined rate.
    """
    return knessl_profile(base, [n], precision).g_values[n]


@dataclass(frozen=True)
class KnesslProfile:
    """Computed lattice corrections g(n) for one base distribution."""

    base: IntegerPmf
    sigma2: mpf
    kappa: CumulantSet
    g_values: Dict[int, mpf]
    precision: int

    def negativity_onset(self) -> Optional[int]:
        """Smallest computed n from which every computed g(n) is negative."""
        onset: Optional[int] = None
        for n in sorted(self.g_values):
            if self.g_values[n] < 0:
                if onset is None:
                    onset = n
            else:
                onset = None
        return onset


def knessl_profile(
    base: IntegerPmf, n_values: Iterable[int], precision: int = DEFAULT_PRECISION
) -> KnesslProfile:
    """Lattice corrections g(n) over a family of fold counts."""
    if sum(1 for _ in base.support()) < 2:
        raise ValueError("the base distribution must have at least 2 support points")
    pmfs = iid_power_pmfs(base, n_values)
    if not pmfs:
        raise ValueError("no fold counts supplied")
    with working_precision(precision):
        raw = [
            mpmath.fsum(w * mpf(k) ** j for k, w in base.items())
            for j in range(1, _CUMULANT_ORDERS + 1)
        ]
        kappa = cumulants_from_raw_moments(raw, precision)
        sigma2 = kappa.kappa(2)
        g_values = {
            n: entropy(pmf) - _gaussian_reference(n, sigma2)
            for n, pmf in pmfs.items()
        }
    return KnesslProfile(
        base=base, sigma2=sigma2, kappa=kappa, g_values=g_values,
        precision=precision,
    )


@dataclass(frozen=True)
class LeadingFit:
    """Log-log fit of |g(n)| to C * n**-k over a geometric n-family.

    ``monotone`` is the health flag: when |g| is not strictly decreasing
    over the family the asymptotic regime was not reached and the fitted
    pair is unreliable.  ``residuals`` records g(n) + C / n**k, the data
    left after removing the fitted leading term.
    """

    constant: float
    exponent: float
    monotone: bool
    residuals: Dict[int, float]


def leading_constant_fit(
    base: IntegerPmf,
    n_range: Iterable[int],
    precision: int = DEFAULT_PRECISION,
) -> LeadingFit:
    """Fit g(n) ~ -C / n**k by least squares on (ln n, ln |g(n)|)."""
    ns = sorted(set(n_range))
    if len(ns) < 4:
        raise ValueError(f"need at least 4 fold counts for a fit, got {len(ns)}")
    profile = knessl_profile(base, ns, precision)
    g_abs = [abs(float(profile.g_values[n])) for n in ns]
    if any(v == 0 for v in g_abs):
        raise ValueError("g(n) vanished exactly; nothing to fit on a log scale")
    xs = [math.log(n) for n in ns]
    ys = [math.log(v) for v in g_abs]
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    exponent = -slope
    constant = math.exp(intercept)
    monotone = all(a > b for a, b in zip(g_abs, g_abs[1:]))
    residuals = {
        n: float(profile.g_values[n]) + constant / n**exponent for n in ns
    }
    return LeadingFit(
        constant=constant, exponent=exponent, monotone=monotone,
        residuals=residuals,
    )


# ---------------------------------------------------------------------------
# Deterministic adaptive quadrature
# ---------------------------------------------------------------------------

_NODE_CACHE: Dict[Tuple[int, int], Tuple[Tuple[mpf, mpf], ...]] = {}


def _gauss_legendre_nodes(order: int, dps: int) -> Tuple[Tuple[mpf, mpf], ...]:
    """Nodes and weights on [-1, 1], Newton-refined at the working precision."""
    key = (order, dps)
    cached = _NODE_CACHE.get(key)
    if cached is not None:
        return cached
    with mpmath.workdps(dps + 20):
        tol = mpf(10) ** (-(dps + 10))
        half: List[Tuple[mpf, mpf]] = []
        for i in range(1, order // 2 + 1):
            x = mpmath.cos(mpmath.pi * (i - mpf(1) / 4) / (order + mpf(1) / 2))
            dp = mpf(1)
            for _ in range(100):
                p_prev, p = mpf(1), x
                for k in range(2, order + 1):
                    p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
                dp = order * (x * p - p_prev) / (x * x - 1)
                step = p / dp
                x -= step
                if abs(step) < tol:
                    break
            half.append((x, 2 / ((1 - x * x) * dp * dp)))
        nodes = [(-x, w) for x, w in half]
        if order % 2:
            p_prev, p = mpf(1), mpf(0)
            for k in range(2, order + 1):
                p_prev, p = p, (-(k - 1) * p_prev) / k
            dp0 = order * (-p_prev) / (-1)
            nodes.append((mpf(0), 2 / (dp0 * dp0)))
        nodes.extend((x, w) for x, w in reversed(half))
    result = tuple((+x, +w) for x, w in nodes)
    _NODE_CACHE[key] = result
    return result


def _panel_value(
    fun: Callable[[mpf], mpf], a: mpf, b: mpf,
    nodes: Tuple[Tuple[mpf, mpf], ...],
) -> mpf:
    mid = (a + b) / 2
    scale = (b - a) / 2
    return scale * mpmath.fsum(w * fun(mid + scale * x) for x, w in nodes)


def _adaptive_integral(
    fun: Callable[[mpf], mpf],
    panels: Sequence[Tuple[mpf, mpf]],
    tol: mpf,
    order: int,
) -> Tuple[mpf, mpf]:
    """Integral over the given panels and a bound on the acceptance slack.

    Each panel is bisected until the two halves reproduce the parent
    value within tol * (panel width) / (total width); accepted defects
    are summed, so the returned error estimate never exceeds tol.
    """
    nodes = _gauss_legendre_nodes(order, mpmath.mp.dps)
    total_width = mpmath.fsum(b - a for a, b in panels)
    if total_width <= 0:
        raise ValueError("quadrature region has no width")
    pieces: List[mpf] = []
    defects: List[mpf] = []
    stack = [(a, b, _panel_value(fun, a, b, nodes), 0) for a, b in panels if b > a]
    while stack:
        a, b, parent, depth = stack.pop()
        mid = (a + b) / 2
        left = _panel_value(fun, a, mid, nodes)
        right = _panel_value(fun, mid, b, nodes)
        defect = abs(left + right - parent)
        if defect <= tol * (b - a) / total_width:
            pieces.append(left)
            pieces.append(right)
            defects.append(defect)
        elif depth >= MAX_BISECTION_DEPTH:
            raise QuadratureError(
                f"panel [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}] still defective "
                f"at bisection depth {MAX_BISECTION_DEPTH}"
            )
        else:
            stack.append((a, mid, left, depth + 1))
            stack.append((mid, b, right, depth + 1))
    return mpmath.fsum(pieces), mpmath.fsum(defects)


@dataclass(frozen=True)
class SmoothedEntropy:
    """Differential entropy of a Gaussian-smoothed lattice distribution."""

    n: Optional[int]
    sigma: mpf
    h_value: mpf
    quadrature_error: mpf


def _mixture_peaks(pmf: IntegerPmf) -> Tuple[List[int], List[mpf]]:
    positions: List[int] = []
    weights: List[mpf] = []
    for k, w in pmf.items():
        if w > 0:
            positions.append(k)
            weights.append(w)
    return positions, weights


def _truncation_bound(weights: Sequence[mpf], sig: mpf) -> mpf:
    """Upper bound on the -f ln f mass lost outside the 8-sigma region.

    Each peak loses at most its own two Gaussian tails beyond 8 standard
    deviations; with z = (x - k)/sigma, -ln(w phi) = -ln w
    + ln(sigma sqrt(2 pi)) + z**2/2, and the z-integrals reduce to the
    Gaussian tail Q(8) and density phi(8).  Absolute values make this an
    upper bound regardless of the signs of the log terms.
    """
    a = mpf(REGION_PAD_SIGMAS)
    phi_a = mpmath.exp(-a * a / 2) / mpmath.sqrt(2 * mpmath.pi)
    q_a = mpmath.erfc(a / mpmath.sqrt(2)) / 2
    z2_tail = q_a + a * phi_a  # integral of z**2 phi(z) beyond a
    log_norm = abs(mpmath.ln(sig * mpmath.sqrt(2 * mpmath.pi)))
    total = mpmath.fsum(
        w * (z2_tail / 2 + q_a * (abs(mpmath.ln(w)) + log_norm)) for w in weights
    )
    return 2 * total


def gaussian_smoothed_entropy(
    pmf: IntegerPmf,
    sigma: RealLike,
    tol: RealLike = "1e-12",
    precision: int = DEFAULT_PRECISION,
    n: Optional[int] = None,
) -> SmoothedEntropy:
    """Differential entropy (nats) of the pmf convolved with N(0, sigma**2).

    The density f(x) = sum_k P(k) phi_sigma(x - k) is integrated as
    -f ln f over [min - 8 sigma, max + 8 sigma] by the deterministic
    adaptive scheme described in the module docstring.  ``n`` is an
    optional label carried into the result (the fold count when the pmf
    is an iid sum).  Raises QuadratureError when the tolerance is not
    reachable within the bisection depth budget.
    """
    sig = as_mpf(sigma, precision)
    tolerance = as_mpf(tol, precision)
    with working_precision(precision):
        if not sig > 0:
            raise ValueError(f"sigma must be positive, got {mpmath.nstr(sig, 8)}")
        if not tolerance > 0:
            raise ValueError("tolerance must be positive")
        positions, weights = _mixture_peaks(pmf)
        window = DENSITY_WINDOW_SIGMAS * sig
        norm = 1 / (sig * mpmath.sqrt(2 * mpmath.pi))
        inv_two_s2 = 1 / (2 * sig * sig)
        pos_f = [mpf(k) for k in positions]
        truncation = _truncation_bound(weights, sig)
        if tolerance <= 2 * truncation:
            raise QuadratureError(
                f"tolerance {mpmath.nstr(tolerance, 3)} is below the "
                f"{REGION_PAD_SIGMAS}-sigma truncation floor "
                f"{mpmath.nstr(2 * truncation, 3)} of the integration region"
            )
        panel_budget = tolerance - truncation

        def density(x: mpf) -> mpf:
            lo = bisect.bisect_left(positions, x - window)
            hi = bisect.bisect_right(positions, x + window)
            if lo >= hi:
                return mpf(0)
            return norm * mpmath.fsum(
                weights[i] * mpmath.exp(-((x - pos_f[i]) ** 2) * inv_two_s2)
                for i in range(lo, hi)
            )

        def integrand(x: mpf) -> mpf:
            v = density(x)
            return -v * mpmath.ln(v) if v > 0 else mpf(0)

        lo_edge = pos_f[0] - REGION_PAD_SIGMAS * sig
        hi_edge = pos_f[-1] + REGION_PAD_SIGMAS * sig
        cut = min(window, mpf(1) / 2)
        edges = {lo_edge, hi_edge}
        for x in pos_f:
            for candidate in (x - cut, x + cut):
                if lo_edge < candidate < hi_edge:
                    edges.add(candidate)
        ordered = sorted(edges)
        panels = [
            (a, b) for a, b in zip(ordered, ordered[1:]) if b > a
        ]
        h_value, defect = _adaptive_integral(
            integrand, panels, panel_budget, QUADRATURE_ORDER
        )
        err = defect + truncation
        floor = mpmath.ln(2 * mpmath.pi * mpmath.e * sig * sig) / 2
        if h_value < floor - tolerance - eps_for(precision):
            raise QuadratureError(
                "smoothed entropy fell below the Gaussian floor; "
                "tolerance not reachable at this precision"
            )
    return SmoothedEntropy(n=n, sigma=sig, h_value=h_value, quadrature_error=err)


@dataclass(frozen=True)
class TulinoRow:
    """One comparison row: the smoothed-entropy increment at fold n."""

    n: int
    increment: mpf
    half_log: mpf
    full_log: mpf
    meets_half: bool
    meets_full: bool


def tulino_verdu_compare(
    p: RealLike,
    sigma: RealLike,
    n_values: Iterable[int],
    tol: RealLike = "1e-9",
    precision: int = DEFAULT_PRECISION,
) -> List[TulinoRow]:
    """Smoothed-entropy increments for Bernoulli sums vs the two log bounds.

    S^(n) adds an independent N(0, sigma**2) to each of the n Bernoulli
    summands, so the lattice distribution of the sum is smoothed by a
    Gaussian of total variance n sigma**2.  For each requested n the row
    reports h(S^(n)) - h(S^(n-1)) against (1/2) ln(n/(n-1)) — the
    unconditional smoothed bound — and ln(n/(n-1)), the doubled rate
    that the discrete inequality implies for large enough n.  The meets_*
    flags allow the two quadrature errors as slack.
    """
    from .dist_core import binomial_pmf  # local import to avoid cycles at startup

    ns = sorted(set(n_values))
    if not ns:
        return []
    if ns[0] < 2:
        raise ValueError("increments need n >= 2")
    sig = as_mpf(sigma, precision)
    needed = sorted(set(ns) | {n - 1 for n in ns})
    results: Dict[int, SmoothedEntropy] = {}
    with working_precision(precision):
        for n in needed:
            pmf = binomial_pmf(n, p, precision)
            results[n] = gaussian_smoothed_entropy(
                pmf, sig * mpmath.sqrt(n), tol, precision, n=n
            )
        rows: List[TulinoRow] = []
        for n in ns:
            inc = results[n].h_value - results[n - 1].h_value
            half = mpmath.ln(mpf(n) / (n - 1)) / 2
            slack = results[n].quadrature_error + results[n - 1].quadrature_error
            rows.append(
                TulinoRow(
                    n=n,
                    increment=inc,
                    half_log=half,
                    full_log=2 * half,
                    meets_half=bool(inc >= half - slack),
                    meets_full=bool(inc >= 2 * half - slack),
                )
            )
    return rows
