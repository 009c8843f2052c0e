"""Closed-form near-point formulas at depth 2 and 3.

Near an integer center on a singular hyperplane the function has no limit;
what exists is an evaluation of the truncated expansion along a concrete
approach direction, with explicit error orders.  This module implements the
depth-2 formula with its corollary at doubly non-positive centers, and the
depth-3 constructions that reduce through depth 2, including the detection
of the genuinely indeterminate configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import mpmath as mp

from .config import PrecisionContext, MBConfig, DEFAULT_CTX, DEFAULT_MB
from .errors import (
    InvalidApproach,
    UnsupportedCenter,
    OnSingularHyperplane,
    NotPositive,
)
from . import zeta1
from . import mb


class Indeterminate:
    """Sentinel for centers where no limit value can be produced."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Indeterminate"


INDETERMINATE = Indeterminate()


@dataclass(frozen=True)
class ApproachSpec:
    """Complex offsets describing how a point approaches an integer center."""

    offsets: Tuple[complex, ...]

    @classmethod
    def of(cls, *eps) -> "ApproachSpec":
        return cls(tuple(mp.mpc(e) for e in eps))

    def __len__(self):
        return len(self.offsets)

    def __getitem__(self, i):
        return self.offsets[i]

    @property
    def nonzero(self) -> Tuple[bool, ...]:
        return tuple(e != 0 for e in self.offsets)


@dataclass(frozen=True)
class PrincipalTerm:
    """One evaluated pole contribution together with its pole factor."""

    value: complex
    pole: str


@dataclass(frozen=True)
class NearPointValue:
    """Evaluated near-point formula: pole pieces, finite part, error order."""

    principal_terms: Tuple[PrincipalTerm, ...]
    finite_part: complex
    error_order: str

    def value(self):
        """Total of all principal terms and the finite part."""
        total = mp.mpc(self.finite_part)
        for t in self.principal_terms:
            total += t.value
        return total


def _require(cond: bool, msg: str):
    if not cond:
        raise InvalidApproach(msg)


def _zeta_split(center: int, delta, ctx: PrecisionContext):
    """zeta at integer center + delta as (pole coefficient over delta, rest).

    The pole coefficient is nonzero only for center 1; the rest is the full
    remaining value so that pole/delta + rest reproduces zeta exactly.
    """
    if center == 1:
        if delta == 0:
            raise InvalidApproach(
                "zeta is evaluated at its pole; the offset sum must be nonzero"
            )
        return mp.mpf(1), mp.zeta(1 + delta) - 1 / delta
    return mp.mpf(0), mp.zeta(center + delta)


def zeta2_near(m, eps: ApproachSpec, ctx: PrecisionContext = DEFAULT_CTX) -> NearPointValue:
    """Depth-2 near-point formula at (m1, m2) with m2 <= 0.

    Evaluates, for s = (m1+e1, m2+e2),

        zeta(s1+s2-1)/(s2-1)
          + sum_{k=0}^{M} binom(-s2, k) zeta(-k) zeta(s1+s2+k)

    exactly, with pole contributions separated out, up to O(|e2|).
    """
    m1, m2 = (int(x) for x in m)
    if m2 > 0:
        raise UnsupportedCenter("the second coordinate of the center must be <= 0")
    if not isinstance(eps, ApproachSpec):
        eps = ApproachSpec.of(*eps)
    if len(eps) != 2:
        raise InvalidApproach("depth-2 formula needs exactly two offsets")
    with ctx.working():
        e1, e2 = eps[0], eps[1]
        _require(e2 != 0, "the offset e2 must be nonzero")
        delta = e1 + e2
        M = mb.capital_m((m1, m2))
        principal = []
        finite = mp.mpc(0)

        pref = 1 / (m2 - 1 + e2)
        pole_c, rest = _zeta_split(m1 + m2 - 1, delta, ctx)
        if pole_c != 0:
            principal.append(
                PrincipalTerm(+(pref * pole_c / delta), "1/(e1+e2)")
            )
        finite += pref * rest

        for k in range(0, M + 1):
            coeff = mp.binomial(-m2 - e2, k) * zeta1.zeta(-k, ctx)
            if coeff == 0:
                continue
            pole_c, rest = _zeta_split(m1 + m2 + k, delta, ctx)
            if pole_c != 0:
                principal.append(
                    PrincipalTerm(+(coeff * pole_c / delta), "1/(e1+e2)")
                )
            finite += coeff * rest

        out = NearPointValue(tuple(principal), +finite, "O(|e2|)")
    return out


def zeta2_corollary(m, eps: ApproachSpec, ctx: PrecisionContext = DEFAULT_CTX) -> NearPointValue:
    """Depth-2 limit formula at centers with m1 <= 0 and m2 <= 0.

    Three explicit groups: a constant zeta ratio, a finite zeta sum (whose
    summands vanish identically for k > -m2), and one pole term carrying the
    factor 1/(e1+e2); valid up to O(|e2|) + O(|e1+e2|).
    """
    m1, m2 = (int(x) for x in m)
    if m1 > 0 or m2 > 0:
        raise UnsupportedCenter("both center coordinates must be <= 0")
    if not isinstance(eps, ApproachSpec):
        eps = ApproachSpec.of(*eps)
    if len(eps) != 2:
        raise InvalidApproach("depth-2 formula needs exactly two offsets")
    with ctx.working():
        e1, e2 = eps[0], eps[1]
        _require(e2 != 0, "the offset e2 must be nonzero")
        _require(e1 + e2 != 0, "the offset sum e1+e2 must be nonzero")

        finite = mp.mpc(zeta1.zeta(m1 + m2 - 1, ctx)) / (m2 - 1)

        for k in range(0, -m2 + 1):
            prod = mp.mpf(1)
            for i in range(k):
                prod *= m2 + i
            term = (
                mp.mpf(-1) ** k / mp.factorial(k)
                * prod
                * zeta1.zeta(-k, ctx)
                * zeta1.zeta(m1 + m2 + k, ctx)
            )
            finite += term

        n = 1 - m1 - m2
        prod = mp.mpc(1)
        for i in range(m2, -m1 + 1):
            prod *= i + e2
        pole_val = (
            mp.mpf(-1) ** n / mp.factorial(n)
            * prod / (e1 + e2)
            * zeta1.zeta(m1 + m2 - 1, ctx)
        )
        principal = (PrincipalTerm(+pole_val, "1/(e1+e2)"),)
        out = NearPointValue(principal, +finite, "O(|e2|)+O(|e1+e2|)")
    return out


def _zeta2_at(s, ctx: PrecisionContext, cfg: MBConfig):
    """Depth-2 evaluation at a concrete off-hyperplane point."""
    try:
        return mb.ez_eval_mb(s, ctx=ctx, cfg=cfg)
    except OnSingularHyperplane as exc:
        raise InvalidApproach(
            f"the approach direction lands a depth-2 argument on a "
            f"singular hyperplane: {exc}"
        ) from exc


def _zeta3_lse(m, eps, ctx: PrecisionContext, cfg: MBConfig) -> NearPointValue:
    """Depth-3 reduction at m3 <= 0: one ratio term plus a finite binomial sum."""
    m1, m2, m3 = m
    e1, e2, e3 = eps[0], eps[1], eps[2]
    s1, s2, s3 = m1 + e1, m2 + e2, m3 + e3
    M = mb.capital_m((m1, m2, m3))
    total = _zeta2_at((s1, s2 + s3 - 1), ctx, cfg) / (s3 - 1)
    for k in range(0, M + 1):
        coeff = mp.binomial(-s3, k) * zeta1.zeta(-k, ctx)
        if coeff == 0:
            continue
        total += coeff * _zeta2_at((s1, s2 + s3 + k), ctx, cfg)
    return NearPointValue((), +total, "O(|e3|)")


def zeta3_near(m, eps: ApproachSpec, ctx: PrecisionContext = DEFAULT_CTX,
               cfg: MBConfig = DEFAULT_MB):
    """Depth-3 near-point value, or the Indeterminate sentinel.

    Supported centers: m3 <= 0 (direct depth reduction), and m2 <= 0 with
    m3 > 1 (harmonic-product rearrangement).  The configuration m2 <= 0,
    m3 = 1 has no limit value and returns Indeterminate.
    """
    m1, m2, m3 = (int(x) for x in m)
    if not isinstance(eps, ApproachSpec):
        eps = ApproachSpec.of(*eps)
    if len(eps) != 3:
        raise InvalidApproach("depth-3 formula needs exactly three offsets")
    with ctx.working():
        if m3 <= 0:
            return _zeta3_lse((m1, m2, m3), eps, ctx, cfg)
        if m2 <= 0 and m3 == 1:
            return INDETERMINATE
        if m2 <= 0 and m3 > 1:
            e1, e2, e3 = eps[0], eps[1], eps[2]
            s1, s2, s3 = m1 + e1, m2 + e2, m3 + e3
            total = zeta1.zeta(s3, ctx) * _zeta2_at((s1, s2), ctx, cfg)
            total -= _zeta2_at((s1 + s3, s2), ctx, cfg)
            total -= _zeta2_at((s1, s2 + s3), ctx, cfg)
            perm1 = _zeta3_lse((m1, m3, m2), ApproachSpec.of(e1, e3, e2), ctx, cfg)
            perm2 = _zeta3_lse((m3, m1, m2), ApproachSpec.of(e3, e1, e2), ctx, cfg)
            total -= perm1.value() + perm2.value()
            return NearPointValue((), +total, "O(|e2|)+O(|e3|)")
        raise UnsupportedCenter(
            "depth-3 near-point formulas cover m3 <= 0, or m2 <= 0 with m3 > 1"
        )
