"""Riemann zeta-function by Euler-Maclaurin summation, with jet output.

One mechanism serves every one-variable need in the package: the
Euler-Maclaurin identity is evaluated in truncated-Taylor (jet) arithmetic in
``eps`` around the requested center, so values, derivatives, Stieltjes
constants and Laurent/Taylor expansions all come from the same error-
controlled pass.  The truncation point ``N`` and the number of Bernoulli
terms ``J`` are chosen from an explicit remainder bound, which keeps the
evaluation uniformly valid on the vertical strips traversed by the
Mellin-Barnes contour.

Stieltjes constants follow the normalization in which ``gamma_n`` is the
literal coefficient of ``(s-1)^n`` in ``zeta(s) - 1/(s-1)`` (so ``gamma_1``
is positive); ``stieltjes_classical`` converts to the common convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .config import DEFAULT_CTX, PrecisionContext
from .errors import PoleAt1, PrecisionUnreachable
from .jets import jet_add, jet_mul, jet_recip, jet_scale, pow_jet

_jet_cache: dict = {}
_MAX_CACHE = 200_000


def _em_parameters(s, tol):
    """Pick (N, J) so the Euler-Maclaurin remainder bound is below tol."""
    sigma = mp.re(s)
    t = abs(mp.im(s))
    digits = int(mp.mp.dps)
    J = max(8, int(0.9 * digits))
    # remainder needs sigma + 2J + 1 > 1 for the tail integral to converge
    J = max(J, int((2 - sigma) / 2) + 2)
    N = max(10, J, int(t / 3) + 10)
    for _ in range(60):
        bound = _em_remainder(s, N, J)
        if bound < tol:
            return N, J, bound
        N = int(N * 1.5) + 4
        J += 2
    raise PrecisionUnreachable(
        f"Euler-Maclaurin bound stalls at {mp.nstr(bound, 5)} for s={s}"
    )


def _em_remainder(s, N, J):
    sigma = mp.re(s)
    denom = sigma + 2 * J + 1
    if denom <= 0.5:
        return mp.inf
    poch = mp.mpf(1)
    x = abs(s)
    for i in range(2 * J + 1):
        poch *= x + i
    b = abs(mp.bernoulli(2 * J + 2)) / mp.factorial(2 * J + 2)
    return b * poch * mp.power(N, -denom) * (abs(s + 2 * J + 1) / denom)


def zeta_jet(s0, order=0, ctx: PrecisionContext = DEFAULT_CTX, minus_pole=False):
    """Jet of zeta(s0 + eps) of the given order.

    With ``minus_pole=True`` (only meaningful at ``s0 == 1``) the jet of
    ``zeta(s) - 1/(s-1)`` is returned instead; its coefficients are the
    Stieltjes constants in the paper normalization.
    """
    s0 = mp.mpc(s0)
    if not minus_pole and s0 == 1:
        raise PoleAt1("zeta has a pole at s = 1")
    if minus_pole and s0 != 1:
        raise ValueError("minus_pole is only supported at center 1")
    key = (s0, order, mp.mp.dps, minus_pole)
    hit = _jet_cache.get(key)
    if hit is not None:
        return list(hit)

    tol = mp.mpf(10) ** (-(mp.mp.dps - 2))
    N, J, _ = _em_parameters(s0, tol)

    out = [mp.mpc(0)] * (order + 1)
    for k in range(1, N):
        out = jet_add(out, pow_jet(k, s0, order))

    # N^{1-s}/(s-1) term; at center 1 fold the pole subtraction in exactly
    if minus_pole:
        # (N^{-eps} - 1)/eps = sum_{n>=0} (-log N)^{n+1}/(n+1)! eps^n
        lN = mp.log(N)
        mid = []
        c = mp.mpc(1)
        for n in range(order + 1):
            c = c * (-lN) / (n + 1)
            mid.append(c)
        out = jet_add(out, mid)
    else:
        npow = pow_jet(N, s0 - 1, order)  # N^{1-s-eps}
        den = [s0 - 1] + ([mp.mpc(1)] if order >= 1 else [])
        out = jet_add(out, jet_mul(npow, jet_recip(den, order), order))

    half = jet_scale(pow_jet(N, s0, order), mp.mpf("0.5"))
    out = jet_add(out, half)

    # Bernoulli correction terms: B_{2j}/(2j)! * poch(s, 2j-1) * N^{-s-2j+1}
    poch = [mp.mpc(1)] + [mp.mpc(0)] * order  # running pochhammer jet
    nfac = 0  # factors accumulated so far; step j needs 2j-1 of them
    npow_step = pow_jet(N, 2, 0)[0]  # N^{-2}
    npow_base = pow_jet(N, s0 - 1, order)  # N^{-s+1-eps}
    cur = npow_base
    for j in range(1, J + 1):
        while nfac < 2 * j - 1:
            lin = [s0 + nfac] + ([mp.mpc(1)] if order >= 1 else [])
            poch = jet_mul(poch, lin, order)
            nfac += 1
        cur = jet_scale(cur, npow_step)  # N^{-s-2j+1-eps}
        coef = mp.bernoulli(2 * j) / mp.factorial(2 * j)
        out = jet_add(out, jet_scale(jet_mul(poch, cur, order), coef))

    if len(_jet_cache) > _MAX_CACHE:
        _jet_cache.clear()
    _jet_cache[key] = list(out)
    return out


def zeta(s, ctx: PrecisionContext = DEFAULT_CTX):
    """zeta(s) on C \\ {1} to relative error <= ctx.tol."""
    with ctx.working():
        s = mp.mpc(s)
        if s == 1:
            raise PoleAt1("zeta(1) is a pole")
        v = zeta_jet(s, 0, ctx)[0]
    return v


def zeta_deriv(n, s, ctx: PrecisionContext = DEFAULT_CTX):
    """n-th derivative of zeta at s != 1."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    with ctx.working():
        s = mp.mpc(s)
        if s == 1:
            raise PoleAt1("zeta(1) is a pole")
        v = zeta_jet(s, n, ctx)[n] * mp.factorial(n)
    return v


def stieltjes(n, ctx: PrecisionContext = DEFAULT_CTX):
    """n-th Stieltjes constant, paper normalization (coefficient of (s-1)^n)."""
    with ctx.working():
        v = zeta_jet(mp.mpc(1), n, ctx, minus_pole=True)[n]
    return mp.re(v)


def stieltjes_classical(n, ctx: PrecisionContext = DEFAULT_CTX):
    """Classical n-th Stieltjes constant (-1)^n n! gamma_n."""
    with ctx.working():
        v = (-1) ** n * mp.factorial(n) * stieltjes(n, ctx)
    return v


def stieltjes_contour(n, radius="0.25", ctx: PrecisionContext = DEFAULT_CTX):
    """Independent oracle: Cauchy extraction of gamma_n on a circle around 1.

    Trapezoid rule on |s-1| = radius with node doubling until two successive
    node counts agree within the context tolerance.
    """
    with ctx.working():
        rho = mp.mpf(radius)
        tol = ctx.tol
        prev = None
        K = 32
        while K <= 16384:
            acc = mp.mpc(0)
            for k in range(K):
                w = mp.expjpi(mp.mpf(2 * k) / K)
                s = 1 + rho * w
                f = zeta_jet(s, 0, ctx)[0] - 1 / (s - 1)
                acc += f * w ** (-n)
            val = acc / (K * rho**n)
            if prev is not None and abs(val - prev) < tol * max(1, abs(val)):
                return mp.re(val)
            prev = val
            K *= 2
        raise PrecisionUnreachable("contour extraction did not stabilize")


@dataclass
class ZetaLaurent1D:
    """Laurent/Taylor data of zeta at an integer center."""

    center: int
    has_pole: bool
    coefficients: list  # c_n for n = 0..N

    def evaluate(self, s):
        s = mp.mpc(s)
        e = s - self.center
        acc = mp.mpc(0)
        for c in reversed(self.coefficients):
            acc = acc * e + c
        if self.has_pole:
            acc += 1 / e
        return acc


def laurent_at(m, order, ctx: PrecisionContext = DEFAULT_CTX):
    """Laurent (m = 1) or Taylor (m != 1) expansion of zeta at integer m."""
    if order < 0:
        raise ValueError("order must be >= 0")
    m = int(m)
    with ctx.working():
        if m == 1:
            coeffs = zeta_jet(mp.mpc(1), order, ctx, minus_pole=True)
            return ZetaLaurent1D(1, True, list(coeffs))
        coeffs = zeta_jet(mp.mpc(m), order, ctx)
        return ZetaLaurent1D(m, False, list(coeffs))
