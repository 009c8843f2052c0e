"""Precision and budget configuration.

All numeric entry points accept a :class:`PrecisionContext`.  ``digits`` is the
number of significant decimal digits carried by the arithmetic; ``tol`` is the
derived relative tolerance ``10**(5 - digits)``.  Internal computations run
with guard digits on top of ``digits``.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import mpmath as mp

GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 30
    term_budget: int = 10_000_000
    order_cap: int = 6

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("digits must be >= 15")
        if self.term_budget < 1:
            raise ValueError("term_budget must be positive")

    @property
    def tol(self) -> mp.mpf:
        with mp.workdps(self.digits + GUARD_DIGITS):
            return mp.mpf(10) ** (5 - self.digits)

    @contextlib.contextmanager
    def working(self):
        """Run the enclosed computation with guard digits."""
        with mp.workdps(self.digits + GUARD_DIGITS):
            yield


DEFAULT_CTX = PrecisionContext()


@dataclass(frozen=True)
class MBConfig:
    """Contour parameters for the Mellin-Barnes vertical-line integral.

    ``eta`` fixes the fractional contour offset; truncation height and step
    are derived adaptively from the tolerance, these fields only set the
    starting point of the refinement.
    """

    eta: float = 0.5
    initial_step: float = 0.25
    max_refinements: int = 12

    def __post_init__(self):
        if not (0 < self.eta < 1):
            raise ValueError("eta must lie in (0, 1)")


DEFAULT_MB = MBConfig()
