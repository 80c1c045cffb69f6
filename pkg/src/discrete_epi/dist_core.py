"""Integer-supported pmfs and their entropies at configurable precision.

A pmf is stored as a dense weight vector over a contiguous block of
integers together with the position of its first entry.  Weights are
mpmath floats created at an explicit decimal precision; every operation
that combines two pmfs insists they were built at the same precision,
and every constructor checks that total mass is one within
``eps_for(precision)``.

Binomial pmfs are built by repeated Bernoulli mixing,

    P[n+1](k) = (1-p) P[n](k) + p P[n](k-1),

which needs no factorials or ratios and is stable at any size.  Sums of
many iid copies use convolution by repeated squaring, so ``n`` copies
cost O(log n) convolutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import mpmath
from mpmath import mpf

from .errors import MassConservationError, PrecisionMismatchError
from .precision import (
    DEFAULT_PRECISION,
    RealLike,
    as_mpf,
    check_precision,
    eps_for,
    working_precision,
)

__all__ = [
    "IntegerPmf",
    "BernoulliParam",
    "bernoulli_entropy",
    "binomial_entropy_chain",
    "binomial_pmf",
    "convolve",
    "delta_pmf",
    "entropy",
    "iid_sum_pmf",
    "mean",
    "omega",
    "shift",
]


@dataclass(frozen=True)
class IntegerPmf:
    """Dense pmf on the integers ``offset .. offset + len(weights) - 1``."""

    offset: int
    weights: Tuple[mpf, ...]
    precision: int

    def __post_init__(self):
        check_precision(self.precision)
        if not isinstance(self.offset, int):
            raise ValueError(f"offset must be an integer, got {self.offset!r}")
        if len(self.weights) == 0:
            raise ValueError("pmf needs at least one weight")
        with working_precision(self.precision):
            for w in self.weights:
                if not (w >= 0):
                    raise ValueError(f"negative or invalid weight {w}")
            mass = mpmath.fsum(self.weights)
            if abs(mass - 1) > eps_for(self.precision):
                raise MassConservationError(
                    f"total mass {mpmath.nstr(mass, 20)} deviates from 1 "
                    f"beyond eps at precision {self.precision}"
                )

    @classmethod
    def from_weights(
        cls,
        weights: Sequence[RealLike],
        offset: int = 0,
        precision: int = DEFAULT_PRECISION,
    ) -> "IntegerPmf":
        converted = tuple(as_mpf(w, precision) for w in weights)
        return cls(offset=offset, weights=converted, precision=precision)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def last(self) -> int:
        return self.offset + self.size - 1

    def support(self) -> range:
        return range(self.offset, self.offset + self.size)

    def weight_at(self, k: int) -> mpf:
        """Weight at absolute integer position k (zero off support)."""
        i = k - self.offset
        if 0 <= i < self.size:
            return self.weights[i]
        with working_precision(self.precision):
            return mpf(0)

    def items(self) -> Iterator[Tuple[int, mpf]]:
        for i, w in enumerate(self.weights):
            yield self.offset + i, w


@dataclass(frozen=True)
class BernoulliParam:
    """Success probability together with its derived reparametrisations.

    q = 1 - p, r = p - 1/2, and t solves r**2 = t / (4 (t + 4)); t
    coincides with omega(p) = (2p-1)**2 / (p (1-p)) and maps (0, 1) onto
    [0, inf) symmetrically in p <-> 1-p.
    """

    p: mpf
    q: mpf
    r: mpf
    t: mpf
    precision: int

    @classmethod
    def from_p(cls, p: RealLike, precision: int = DEFAULT_PRECISION) -> "BernoulliParam":
        pv = as_mpf(p, precision)
        with working_precision(precision):
            if not (0 < pv < 1):
                raise ValueError(f"p must lie strictly inside (0, 1), got {pv}")
            q = 1 - pv
            r = pv - mpf(1) / 2
            t = (2 * pv - 1) ** 2 / (pv * q)
        return cls(p=pv, q=q, r=r, t=t, precision=precision)


def _check_same_precision(a: IntegerPmf, b: IntegerPmf) -> int:
    if a.precision != b.precision:
        raise PrecisionMismatchError(
            f"pmfs built at different precisions: {a.precision} vs {b.precision}"
        )
    return a.precision


def delta_pmf(k: int = 0, precision: int = DEFAULT_PRECISION) -> IntegerPmf:
    """Point mass at the integer k."""
    with working_precision(precision):
        return IntegerPmf(offset=k, weights=(mpf(1),), precision=precision)


def bernoulli_entropy(p: RealLike, precision: int = DEFAULT_PRECISION) -> mpf:
    """Binary entropy H(p) = -p ln p - (1-p) ln(1-p) in nats."""
    pv = as_mpf(p, precision)
    with working_precision(precision):
        if not (0 <= pv <= 1):
            raise ValueError(f"p must lie in [0, 1], got {pv}")
        if pv == 0 or pv == 1:
            return mpf(0)
        q = 1 - pv
        return -pv * mpmath.ln(pv) - q * mpmath.ln(q)


def omega(p: RealLike, precision: int = DEFAULT_PRECISION) -> mpf:
    """Skew parameter omega(p) = (2p-1)**2 / (p (1-p)).

    Zero exactly at p = 1/2, symmetric under p <-> 1-p, and strictly
    increasing in |p - 1/2|; diverges at the endpoints, which are
    rejected.
    """
    return BernoulliParam.from_p(p, precision).t


def binomial_pmf(n: int, p: RealLike, precision: int = DEFAULT_PRECISION) -> IntegerPmf:
    """Binomial(n, p) pmf on support {0, ..., n} via Bernoulli mixing."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    pv = as_mpf(p, precision)
    with working_precision(precision):
        if not (0 <= pv <= 1):
            raise ValueError(f"p must lie in [0, 1], got {pv}")
        q = 1 - pv
        w = [mpf(1)]
        for _ in range(n):
            nxt = [q * w[0]]
            for k in range(1, len(w)):
                nxt.append(q * w[k] + pv * w[k - 1])
            nxt.append(pv * w[-1])
            w = nxt
    return IntegerPmf(offset=0, weights=tuple(w), precision=precision)


def convolve(a: IntegerPmf, b: IntegerPmf) -> IntegerPmf:
    """Pmf of the sum of independent variables with pmfs a and b."""
    precision = _check_same_precision(a, b)
    with working_precision(precision):
        out = [mpf(0)] * (a.size + b.size - 1)
        for i, wa in enumerate(a.weights):
            if wa == 0:
                continue
            for j, wb in enumerate(b.weights):
                out[i + j] += wa * wb
    return IntegerPmf(offset=a.offset + b.offset, weights=tuple(out), precision=precision)


def shift(pmf: IntegerPmf, k: int) -> IntegerPmf:
    """Translate the support by the integer k; weights are unchanged."""
    if not isinstance(k, int):
        raise ValueError(f"shift must be an integer, got {k!r}")
    return IntegerPmf(offset=pmf.offset + k, weights=pmf.weights, precision=pmf.precision)


def entropy(pmf: IntegerPmf) -> mpf:
    """Shannon entropy -sum w ln w in nats; zero weights contribute zero."""
    with working_precision(pmf.precision):
        return -mpmath.fsum(w * mpmath.ln(w) for w in pmf.weights if w > 0)


def mean(pmf: IntegerPmf) -> mpf:
    with working_precision(pmf.precision):
        return mpmath.fsum(k * w for k, w in pmf.items())


def iid_sum_pmf(base: IntegerPmf, n: int) -> IntegerPmf:
    """Pmf of the sum of n iid copies of base, by repeated squaring.

    n = 0 gives the point mass at zero (the empty sum).
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    result = delta_pmf(0, base.precision)
    square = base
    e = n
    while e:
        if e & 1:
            result = convolve(result, square)
        e >>= 1
        if e:
            square = convolve(square, square)
    return result


def binomial_entropy_chain(
    p: RealLike, n_max: int, precision: int = DEFAULT_PRECISION
) -> list:
    """Entropies H[Binomial(n, p)] for n = 0 .. n_max in one pass.

    One Bernoulli mixing step per n keeps the total cost quadratic in
    n_max, which is what the threshold scans need.
    """
    if not isinstance(n_max, int) or n_max < 0:
        raise ValueError(f"n_max must be a nonnegative integer, got {n_max!r}")
    pv = as_mpf(p, precision)
    with working_precision(precision):
        if not (0 <= pv <= 1):
            raise ValueError(f"p must lie in [0, 1], got {pv}")
        q = 1 - pv
        out = [mpf(0)]
        w = [mpf(1)]
        for _ in range(n_max):
            nxt = [q * w[0]]
            for k in range(1, len(w)):
                nxt.append(q * w[k] + pv * w[k - 1])
            nxt.append(pv * w[-1])
            w = nxt
            out.append(-mpmath.fsum(x * mpmath.ln(x) for x in w if x > 0))
    return out
