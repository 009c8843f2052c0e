"""Direct truncated-series evaluation of zeta_r inside its convergence tube.

This is the package's independent oracle: everything is summed from the
defining nested Dirichlet series.  The innermost layer is taken in closed
form as a Hurwitz-zeta derivative (mpmath), so only the outer ``r-1`` layers
are truncated; their cutoffs are chosen from an explicit integral-comparison
tail bound computed in double precision with a safety factor.

For depth 2 a certified Euler-Maclaurin tail acceleration takes over when
the raw truncation budget is infeasible (points close to the tube boundary),
so scalar depth-2 values are available at full precision everywhere inside
the tube.  Deeper near-boundary points and derivative requests still raise
:class:`PrecisionUnreachable` instead of returning an uncertified value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .config import DEFAULT_CTX, PrecisionContext
from .errors import OutOfDomain, PrecisionUnreachable

SAFETY = 4.0


@dataclass(frozen=True)
class DomainDescriptor:
    """The absolute-convergence tube of depth ``r``.

    Membership means every trailing partial sum s_j + ... + s_r has real part
    strictly greater than r - j + 1.
    """

    r: int

    def contains(self, s) -> bool:
        s = tuple(mp.mpc(x) for x in s)
        if len(s) != self.r:
            raise ValueError("point arity does not match depth")
        acc = mp.mpf(0)
        for j in range(self.r - 1, -1, -1):
            acc += mp.re(s[j])
            if not acc > self.r - j:
                return False
        return True


def in_domain(s) -> bool:
    return DomainDescriptor(len(tuple(s))).contains(s)


# ---------------------------------------------------------------------------
# tail bounds (double precision, conservative)
# ---------------------------------------------------------------------------

def upper_gamma_int(L: int, u: float) -> float:
    """Gamma(L+1, u) = L! e^{-u} sum_{k<=L} u^k / k! for integer L >= 0."""
    acc = 0.0
    term = 1.0
    for k in range(L + 1):
        acc += term
        term *= u / (k + 1)
    return math.factorial(L) * math.exp(-u) * acc


def tail_log_power(N: float, sigma: float, L: int) -> float:
    """Bound on sum_{m > N} (log m)^L m^{-sigma}, valid for sigma > 1.

    Integral comparison plus the first term; requires the summand to be
    decreasing beyond N, i.e. sigma * log N >= L (callers enforce this).
    """
    if sigma <= 1:
        return math.inf
    lg = math.log(N)
    first = lg**L * N**-sigma
    integral = upper_gamma_int(L, (sigma - 1) * lg) / (sigma - 1) ** (L + 1)
    return first + integral


def _layer_params(sigmas, ls):
    """Power-form bounds (kappa, Lambda, mu) for the tails T_j, innermost first.

    |T_j(M)| <= kappa_j (log M)^{Lambda_j} M^{-mu_j} for admissible M, where
    T_j is the full nested tail over M_j > M.
    """
    r = len(sigmas)
    params = [None] * r
    kappa, Lam, mu = 1.0, 0, 0.0
    for j in range(r - 1, -1, -1):
        sig_eff = sigmas[j] + mu
        if sig_eff <= 1.0:
            raise OutOfDomain(
                f"partial-sum condition fails at layer {j + 1} "
                f"(effective exponent {sig_eff:.3f} <= 1)"
            )
        kappa = kappa * (1.0 + 2.0 / (sig_eff - 1.0))
        Lam = Lam + ls[j]
        params[j] = (kappa, Lam, sig_eff)
        mu = sig_eff - 1.0
    return params


def _solve_cutoff(kappa, Lam, sig_eff, target):
    """Smallest-ish C with kappa * tail_log_power(C, sig_eff, Lam) < target."""
    start_logs = (Lam / max(sig_eff, 1.01),
                  (Lam + 1) / (sig_eff - 1.0))
    if max(start_logs) > 42:  # starting point already past any sane budget
        raise PrecisionUnreachable(
            "tail bound cannot reach the requested tolerance"
        )
    C = max(8.0, math.exp(start_logs[0]), math.exp(start_logs[1]))
    for _ in range(400):
        if kappa * tail_log_power(C, sig_eff, Lam) < target:
            return int(math.ceil(C))
        C *= 1.5
        if C > 1e18:
            break
    raise PrecisionUnreachable(
        "tail bound cannot reach the requested tolerance"
    )


def _prefix_weight_bound(C: int, sigma: float, L: int) -> float:
    """Upper bound on sum_{M=1}^{C} (log M)^L M^{-sigma}.

    Exact for small C; otherwise exact head plus an integral-comparison
    bound on the remainder (monotone log factor bounded by its value at C).
    """
    head_len = min(C, 4096)
    w = sum(math.log(M) ** L * M ** -sigma for M in range(1, head_len + 1))
    if C > head_len:
        lgC = math.log(C)
        if sigma > 1.0:
            w += lgC**L * tail_log_power(head_len, sigma, 0)
        elif sigma == 1.0:
            w += lgC**L * math.log(C / head_len)
        else:
            w += lgC**L * (C ** (1.0 - sigma) - head_len ** (1.0 - sigma)) / (1.0 - sigma)
    return w


def _choose_cutoffs(sigmas, ls, tol, budget):
    """Layer cutoffs meeting ``tol`` within ``budget`` composite terms.

    Chooses each outer layer's truncation point from the tail bounds,
    weighting inner tails by a bound on the enumerated prefix mass; returns
    (cutoffs, certified total tail bound).
    """
    r = len(sigmas)
    params = _layer_params(sigmas, ls)
    cutoffs = []
    W = 1.0
    total_terms = 1.0
    bound = 0.0
    per_layer_target = tol / (SAFETY * (r - 1))
    for j in range(r - 1):
        kappa, Lam, sig_eff = params[j]
        C = _solve_cutoff(kappa, Lam, sig_eff, per_layer_target / max(W, 1e-300))
        total_terms *= C
        if total_terms > budget:
            raise PrecisionUnreachable(
                f"term budget {budget} exceeded "
                f"(needs ~{total_terms:.2e} composite terms)"
            )
        cutoffs.append(C)
        bound += W * kappa * tail_log_power(C, sig_eff, Lam)
        W *= _prefix_weight_bound(C, sigmas[j], ls[j])
    return cutoffs, bound


# ---------------------------------------------------------------------------
# certified Euler-Maclaurin acceleration for scalar depth-2 values
# ---------------------------------------------------------------------------

def _accel2_value(q, tol):
    """(value, certified bound) of zeta_2(s1, s2) near the tube boundary.

    The outer sum is cut at C and its tail, rewritten over N = M + 1 as
    sum_{N > C+1} (N-1)^{-s1} zeta(s2, N), is expanded in powers of 1/N:
    the binomial series for (1 - 1/N)^{-s1} times the Euler-Maclaurin
    asymptotic series for zeta(s2, N).  Every product term sums to a Hurwitz
    zeta in closed form; both truncation remainders carry explicit bounds
    (geometric-ratio for the binomial factor, first-omitted-term with the
    standard |s+2K+1|/(Re s + 2K+1) factor for the asymptotic series).
    """
    s1, s2 = (mp.mpc(x) for x in q)
    tol = mp.mpf(tol)
    sig1, sig2 = mp.re(s1), mp.re(s2)
    A = abs(s1)
    piece_tol = tol / 8

    for C in (64, 128, 256, 512, 1024):
        a = mp.mpf(C + 2)
        x = 1 / a
        g1 = (1 - x) ** (-max(sig1, mp.mpf(0)))

        # asymptotic parts of zeta(s2, N): coefficient zc_p and offset e_p so
        # that the part is zc_p * N^{-(s2 - 1 + e_p)}
        parts = [(1 / (s2 - 1), 0), (mp.mpf(1) / 2, 1)]
        em_rem = None
        prev_mag = mp.inf
        for k in range(1, 256):
            coeff = mp.bernoulli(2 * k) / mp.factorial(2 * k) * mp.rf(s2, 2 * k - 1)
            mag = abs(coeff) * a ** (1 - sig2 - 2 * k)
            if mag >= prev_mag:
                break  # asymptotic series started diverging at this C
            fac = abs(s2 + 2 * k - 1) / (sig2 + 2 * k - 1)
            rem = g1 * fac * abs(coeff) * mp.zeta(sig1 + sig2 - 1 + 2 * k, a)
            if rem < piece_tol:
                em_rem = rem
                break
            parts.append((coeff, 2 * k))
            prev_mag = mag
        if em_rem is None:
            continue

        # binomial truncation: need the term ratio <= 1/2 past the cutoff
        part_mass = sum(
            abs(zc) * mp.zeta(sig1 + sig2 - 1 + e, a) for zc, e in parts
        )
        bin_rem = None
        b = mp.mpf(1)  # poch(A, i) / i!
        for i in range(0, 512):
            b_next = b * (A + i) / (i + 1)
            if (A + i + 1) / (i + 2) * x <= mp.mpf(1) / 2:
                r_bound = 2 * b_next * x ** (i + 1) * g1 * part_mass
                if r_bound < piece_tol:
                    bin_rem = r_bound
                    bin_I = i
                    break
            b = b_next
        if bin_rem is None:
            continue

        head = mp.mpc(0)
        for M in range(1, C + 1):
            head += mp.power(M, -s1) * mp.zeta(s2, M + 1)
        tail = mp.mpc(0)
        coef = mp.mpc(1)  # poch(s1, i) / i!
        for i in range(bin_I + 1):
            inner = mp.mpc(0)
            for zc, e in parts:
                inner += zc * mp.zeta(s1 + s2 - 1 + i + e, a)
            tail += coef * inner
            coef = coef * (s1 + i) / (i + 1)
        return head + tail, em_rem + bin_rem

    raise PrecisionUnreachable(
        "depth-2 acceleration did not certify the requested tolerance"
    )


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def ez_deriv_full(l, q, ctx: PrecisionContext = DEFAULT_CTX, *, abs_tol=None,
                  term_cap=None):
    """(value, certified tail bound) of the (l_1..l_r)-th partial derivative.

    The value is the truncated nested sum with closed-form innermost layer;
    the bound covers everything discarded by the outer truncations.
    ``abs_tol`` overrides the context tolerance the truncation must certify
    (used for near-boundary points where the default is unreachable).
    """
    q = tuple(mp.mpc(x) for x in q)
    l = tuple(int(n) for n in l)
    r = len(q)
    if len(l) != r:
        raise ValueError("multi-index arity does not match point arity")
    if any(n < 0 for n in l):
        raise ValueError("derivative orders must be non-negative")
    if not in_domain(q):
        raise OutOfDomain(f"point {q} violates the convergence-tube conditions")

    with ctx.working():
        tol = float(ctx.tol) if abs_tol is None else float(abs_tol)
        sigmas = [float(mp.re(x)) for x in q]

        if r == 1:
            val = mp.zeta(q[0], 1, l[0]) if l[0] else mp.zeta(q[0], 1)
            return val, mp.mpf(0)

        try:
            cutoffs, bound = _choose_cutoffs(
                sigmas, l, tol, ctx.term_budget if term_cap is None
                else min(ctx.term_budget, term_cap)
            )
        except PrecisionUnreachable:
            if r == 2 and l == (0, 0):
                val, bound = _accel2_value(q, tol)
                return +val, mp.mpf(bound)
            raise

    # widen the working precision to absorb rounding accumulated over the
    # longest running recurrence / summation loop
    extra = int(math.log10(max(cutoffs))) + 2
    with mp.workdps(ctx.digits + 10 + extra):
        sr, lr = q[-1], l[-1]
        top = cutoffs[-1]

        # innermost layer in closed form at the start, then extended by the
        # shift recurrence: d^l/ds^l zeta(s, M+1) = (value at M) - (-log M)^l M^-s
        inner_vals = [None] * (top + 1)
        v = mp.zeta(sr, 2, lr) if lr else mp.zeta(sr, 2)
        inner_vals[1] = v
        for M in range(2, top + 1):
            t = mp.power(M, -sr)
            if lr:
                t = t * (-mp.log(M)) ** lr
            v = v - t
            inner_vals[M] = v

        # per-layer factor tables (-log M)^{l_j} M^{-s_j}
        factors = []
        for j in range(r - 1):
            s_j, l_j = q[j], l[j]
            tab = [None] * (cutoffs[j] + 1)
            for M in range(1, cutoffs[j] + 1):
                f = mp.power(M, -s_j)
                if l_j:
                    f = f * (-mp.log(M)) ** l_j
                tab[M] = f
            factors.append(tab)

        def layer(j, start, prefix):
            acc = mp.mpc(0)
            C = cutoffs[j]
            tab = factors[j]
            if j == r - 2:
                for M in range(start, C + 1):
                    acc += tab[M] * inner_vals[M]
            else:
                for M in range(start, C + 1):
                    acc += layer(j + 1, M + 1, prefix * tab[M])
                return acc
            return prefix * acc

        val = layer(0, 1, mp.mpc(1))
        val = mp.mpc(val)
    with ctx.working():
        return +val, mp.mpf(bound)


def ez_deriv(l, q, ctx: PrecisionContext = DEFAULT_CTX):
    return ez_deriv_full(l, q, ctx)[0]


def ez_value(s, ctx: PrecisionContext = DEFAULT_CTX):
    return ez_deriv_full((0,) * len(tuple(s)), s, ctx)[0]


def ez_value_full(s, ctx: PrecisionContext = DEFAULT_CTX, *, abs_tol=None):
    return ez_deriv_full((0,) * len(tuple(s)), s, ctx, abs_tol=abs_tol)


def ez_taylor(q, order: int, ctx: PrecisionContext = DEFAULT_CTX, *,
              caps=None, abs_tol=None, term_cap=None):
    """All Taylor coefficients of zeta_r at q up to total order ``order``.

    Returns (coeffs, bound): a dict mapping each multi-index n (with
    sum(n) <= order and n_i <= caps[i]) to the coefficient
    (d^n zeta_r / ds^n)(q) / n!, plus a certified truncation bound that
    covers every returned coefficient.  One pass over the nested sum
    produces the whole table.
    """
    q = tuple(mp.mpc(x) for x in q)
    r = len(q)
    caps = tuple(min(int(order), int(c)) for c in (caps or (order,) * r))
    if len(caps) != r:
        raise ValueError("caps arity does not match point arity")
    if not in_domain(q):
        raise OutOfDomain(f"point {q} violates the convergence-tube conditions")

    with ctx.working():
        tol = float(ctx.tol) if abs_tol is None else float(abs_tol)
        sigmas = [float(mp.re(x)) for x in q]
        facts = [mp.factorial(p) for p in range(order + 1)]

        if r == 1:
            coeffs = {
                (p,): (mp.zeta(q[0], 1, p) if p else mp.zeta(q[0], 1)) / facts[p]
                for p in range(caps[0] + 1)
            }
            return coeffs, mp.mpf(0)

        budget = ctx.term_budget if term_cap is None else min(
            ctx.term_budget, term_cap
        )
        cutoffs, bound = _choose_cutoffs(sigmas, caps, tol, budget)

    extra = int(math.log10(max(cutoffs))) + 2
    with mp.workdps(ctx.digits + 10 + extra):
        facts = [mp.factorial(p) for p in range(order + 1)]
        sr, capr = q[-1], caps[-1]
        top = cutoffs[-1]

        # innermost layer: Hurwitz derivatives at the start, then extended by
        # d^p/ds^p zeta(s, M+1) = (value at M) - (-log M)^p M^-s
        inner = [[None] * (top + 1) for _ in range(capr + 1)]
        for p in range(capr + 1):
            inner[p][1] = (mp.zeta(sr, 2, p) if p else mp.zeta(sr, 2)) / facts[p]
        for M in range(2, top + 1):
            pw = mp.power(M, -sr)
            lg = -mp.log(M)
            lgp = mp.mpf(1)
            for p in range(capr + 1):
                inner[p][M] = inner[p][M - 1] - lgp * pw / facts[p]
                lgp = lgp * lg

        # per-layer factor tables (-log M)^p M^{-s_j} / p!
        factors = []
        for j in range(r - 1):
            s_j, cap_j, C = q[j], caps[j], cutoffs[j]
            tab = [[None] * (C + 1) for _ in range(cap_j + 1)]
            for M in range(1, C + 1):
                pw = mp.power(M, -s_j)
                lg = -mp.log(M)
                lgp = mp.mpf(1)
                for p in range(cap_j + 1):
                    tab[p][M] = lgp * pw / facts[p]
                    lgp = lgp * lg
            factors.append(tab)

        def layer(j, start):
            out: dict = {}
            C = cutoffs[j]
            cap_j = caps[j]
            tab = factors[j]
            for M in range(start, C + 1):
                if j == r - 2:
                    sub = {(p,): inner[p][M] for p in range(capr + 1)}
                else:
                    sub = layer(j + 1, M + 1)
                for p in range(cap_j + 1):
                    f = tab[p][M]
                    for k, v in sub.items():
                        if p + sum(k) <= order:
                            key = (p,) + k
                            out[key] = out.get(key, mp.mpc(0)) + f * v
            return out

        coeffs = {k: mp.mpc(v) for k, v in layer(0, 1).items()}
    with ctx.working():
        return {k: +v for k, v in coeffs.items()}, mp.mpf(bound)
