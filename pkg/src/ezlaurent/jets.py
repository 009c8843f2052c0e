"""Truncated Taylor/Laurent series arithmetic ("jets").

Three small value classes carry all coefficient bookkeeping in the package:

* a 1-D jet is a plain list ``[c0, c1, ...]`` of ``mpc`` coefficients,
* :class:`MultiTaylor` is a truncated multivariate Taylor series,
* :class:`Laurent1D` is a one-variable Laurent polynomial (finitely many
  negative powers), used by the restricted expansions.

Everything here is exact arithmetic on coefficients at the ambient mpmath
precision; truncation orders are explicit.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp


# ---------------------------------------------------------------------------
# 1-D jets (lists of coefficients)
# ---------------------------------------------------------------------------

def jet_mul(a, b, order):
    out = [mp.mpc(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            out[i + j] += ai * bj
    return out


def jet_add(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        for i in range(n)
    ]


def jet_scale(a, c):
    return [c * x for x in a]


def jet_recip(a, order):
    """Reciprocal of a jet with nonzero constant term."""
    if a[0] == 0:
        raise ZeroDivisionError("jet has zero constant term")
    inv0 = 1 / a[0]
    out = [inv0] + [mp.mpc(0)] * order
    for n in range(1, order + 1):
        s = mp.mpc(0)
        for k in range(1, min(n, len(a) - 1) + 1):
            s += a[k] * out[n - k]
        out[n] = -inv0 * s
    return out


def jet_exp(a, order):
    """exp of a jet with zero constant term."""
    if a[0] != 0:
        raise ValueError("jet_exp expects zero constant term")
    out = [mp.mpc(1)] + [mp.mpc(0)] * order
    # out' = a' * out, coefficientwise recurrence
    for n in range(1, order + 1):
        s = mp.mpc(0)
        for k in range(1, min(n, len(a) - 1) + 1):
            s += k * a[k] * out[n - k]
        out[n] = s / n
    return out


def pow_jet(base, expo, order):
    """Jet of s -> base**(-(expo + eps)) ... convenience for k^{-s} terms.

    Returns the jet of ``exp(-(expo+eps) log base)`` in eps, i.e. coefficient
    ``n`` is ``base**(-expo) (-log base)^n / n!``.
    """
    lb = mp.log(base)
    c = mp.power(base, -expo)
    out = []
    term = mp.mpc(1)
    for n in range(order + 1):
        out.append(c * term)
        term = term * (-lb) / (n + 1)
    return out


# ---------------------------------------------------------------------------
# Multivariate truncated Taylor series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Trunc:
    """Truncation spec: total-order cap plus optional per-variable caps."""

    total: int
    caps: tuple | None = None

    def keeps(self, idx) -> bool:
        if sum(idx) > self.total:
            return False
        if self.caps is not None:
            return all(i <= c for i, c in zip(idx, self.caps))
        return True


class MultiTaylor:
    """Truncated Taylor series in ``dim`` variables, coefficients by multi-index."""

    __slots__ = ("dim", "trunc", "coeffs")

    def __init__(self, dim, trunc: Trunc, coeffs=None):
        self.dim = dim
        self.trunc = trunc
        self.coeffs = {} if coeffs is None else coeffs

    @classmethod
    def constant(cls, dim, trunc, value):
        mt = cls(dim, trunc)
        if value != 0:
            mt.coeffs[(0,) * dim] = mp.mpc(value)
        return mt

    @classmethod
    def affine(cls, dim, trunc, weights, shift=0):
        """shift + sum_i weights[i] * eps_i."""
        mt = cls(dim, trunc)
        if shift != 0:
            mt.coeffs[(0,) * dim] = mp.mpc(shift)
        for i, w in enumerate(weights):
            if w != 0:
                idx = tuple(1 if k == i else 0 for k in range(dim))
                if trunc.keeps(idx):
                    mt.coeffs[idx] = mp.mpc(w)
        return mt

    def copy(self):
        return MultiTaylor(self.dim, self.trunc, dict(self.coeffs))

    def __add__(self, other):
        out = self.copy()
        for idx, c in other.coeffs.items():
            out.coeffs[idx] = out.coeffs.get(idx, mp.mpc(0)) + c
        return out

    def __sub__(self, other):
        out = self.copy()
        for idx, c in other.coeffs.items():
            out.coeffs[idx] = out.coeffs.get(idx, mp.mpc(0)) - c
        return out

    def scale(self, c):
        c = mp.mpc(c)
        return MultiTaylor(
            self.dim, self.trunc, {i: c * v for i, v in self.coeffs.items()}
        )

    def __mul__(self, other):
        trunc = self.trunc
        out = MultiTaylor(self.dim, trunc)
        oc = out.coeffs
        for ia, ca in self.coeffs.items():
            if ca == 0:
                continue
            for ib, cb in other.coeffs.items():
                idx = tuple(x + y for x, y in zip(ia, ib))
                if trunc.keeps(idx):
                    oc[idx] = oc.get(idx, mp.mpc(0)) + ca * cb
        return out

    def compose_jet(self, jet, weights):
        """Substitute u = sum_i weights[i] eps_i into a 1-D jet in u.

        Returns sum_n jet[n] * u^n truncated.  Horner scheme over the affine
        form keeps the cost linear in len(jet).
        """
        u = MultiTaylor.affine(self.dim, self.trunc, weights)
        out = MultiTaylor.constant(self.dim, self.trunc, 0)
        for c in reversed(jet):
            out = out * u
            if c != 0:
                z = (0,) * self.dim
                out.coeffs[z] = out.coeffs.get(z, mp.mpc(0)) + mp.mpc(c)
        return out

    @classmethod
    def from_jet(cls, dim, trunc, jet, weights):
        return cls(dim, trunc).compose_jet(jet, weights)

    def evaluate(self, eps):
        total = mp.mpc(0)
        pows = [[mp.mpc(1)] for _ in range(self.dim)]
        maxdeg = [0] * self.dim
        for idx in self.coeffs:
            for i, n in enumerate(idx):
                maxdeg[i] = max(maxdeg[i], n)
        for i in range(self.dim):
            e = mp.mpc(eps[i])
            for _ in range(maxdeg[i]):
                pows[i].append(pows[i][-1] * e)
        for idx, c in self.coeffs.items():
            term = c
            for i, n in enumerate(idx):
                if n:
                    term = term * pows[i][n]
            total += term
        return total

    def coefficient(self, idx):
        return self.coeffs.get(tuple(idx), mp.mpc(0))

    def prune(self, floor=0):
        """Drop exact zeros (and coefficients below ``floor`` in magnitude)."""
        self.coeffs = {
            i: c for i, c in self.coeffs.items() if c != 0 and abs(c) > floor
        }
        return self

    def restrict_1d(self, alphas, order):
        """Substitute eps_i = alphas[i] * t; returns a 1-D jet in t."""
        out = [mp.mpc(0)] * (order + 1)
        for idx, c in self.coeffs.items():
            deg = sum(idx)
            if deg > order:
                continue
            w = c
            for i, n in enumerate(idx):
                for _ in range(n):
                    w = w * alphas[i]
            out[deg] += w
        return out


# ---------------------------------------------------------------------------
# One-variable Laurent polynomials
# ---------------------------------------------------------------------------

class Laurent1D:
    """Finite Laurent expansion sum_{n >= -p} c_n t^n truncated at t^order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs=None):
        self.order = order
        self.coeffs = {} if coeffs is None else coeffs

    @classmethod
    def from_jet(cls, jet, order, shift=0):
        out = cls(order)
        for n, c in enumerate(jet):
            if n + shift <= order and c != 0:
                out.coeffs[n + shift] = mp.mpc(c)
        return out

    def coefficient(self, n):
        return self.coeffs.get(n, mp.mpc(0))

    @property
    def min_degree(self):
        return min(self.coeffs) if self.coeffs else 0

    def __add__(self, other):
        out = Laurent1D(min(self.order, other.order), dict(self.coeffs))
        for n, c in other.coeffs.items():
            out.coeffs[n] = out.coeffs.get(n, mp.mpc(0)) + c
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = mp.mpc(c)
        return Laurent1D(self.order, {n: c * v for n, v in self.coeffs.items()})

    def __mul__(self, other):
        order = min(self.order, other.order)
        out = Laurent1D(order)
        oc = out.coeffs
        for na, ca in self.coeffs.items():
            if ca == 0:
                continue
            for nb, cb in other.coeffs.items():
                n = na + nb
                if n <= order:
                    oc[n] = oc.get(n, mp.mpc(0)) + ca * cb
        return out

    def recip(self):
        """Reciprocal, valid when the lowest-order coefficient is nonzero."""
        if not self.coeffs:
            raise ZeroDivisionError("reciprocal of zero Laurent series")
        nu = self.min_degree
        width = self.order - nu
        unit = [self.coefficient(nu + k) for k in range(width + 1)]
        inv = jet_recip(unit, width)
        out = Laurent1D(self.order)
        for k, c in enumerate(inv):
            if -nu + k <= self.order and c != 0:
                out.coeffs[-nu + k] = c
        return out

    def evaluate(self, t):
        t = mp.mpc(t)
        return mp.fsum(
            (c * t**n for n, c in self.coeffs.items()), absolute=False
        )

    def prune(self):
        self.coeffs = {n: c for n, c in self.coeffs.items() if c != 0}
        return self
