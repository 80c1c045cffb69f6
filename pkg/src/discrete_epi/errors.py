"""Exception taxonomy shared across the package.

The command line front end maps these onto distinct exit codes:
bad arguments and domain violations exit 2, exhausted iteration or
refinement budgets exit 3, and internal consistency failures (exact
algebra that should cancel but does not) exit 4.
"""

from __future__ import annotations


class PrecisionMismatchError(ValueError):
    """Two precision-carrying values were combined at different precisions."""


class MassConservationError(ValueError):
    """A weight vector does not sum to one within the mass tolerance."""


class SeriesTruncationError(RuntimeError):
    """A series evaluation hit its term cap before reaching the tolerance.

    Carries the partial evaluation so callers can inspect how far the
    sum got.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ConsistencyError(RuntimeError):
    """An exact identity failed to hold (non-zero remainder, parity leak).

    This always indicates a genuine defect, never a tolerance issue, so
    it is raised as a hard error and surfaces as its own exit code.
    """
