"""Analytic continuation of nested zeta values by contour recursion.

Depth r reduces to depth r-1 through

    zeta_r(s) = zeta_{r-1}(s_1..s_{r-2}, s_{r-1}+s_r-1) / (s_r - 1)
              + sum_{k<M} C(-s_r, k) zeta_{r-1}(s_1.., s_{r-1}+s_r+k) zeta(-k)
              + I(s; M - eta) / Gamma(s_r)

where I is a vertical-line integral of Gamma(s_r+z) Gamma(-z)
zeta_{r-1}(s_1.., s_{r-1}+s_r+z) zeta(-z).  The same recursion run on
truncated Taylor jets produces extended Laurent expansions at arbitrary
integer centers (``expand_at``): the simple-pole branch contributes the
linear denominator factors, the finite sum and the integral contribute
analytic numerators, and merged-variable exponents are redistributed
binomially.

The contour offset M is raised beyond the analyticity requirement until the
integrand's depth-(r-1) factor is cheap for the direct series evaluator;
every extra unit of M moves one residue from the integral into the finite
sum, so the identity is preserved.  Quadrature error is certified by step
halving (with widened truncation) until two levels agree.
"""

from __future__ import annotations

import math

import mpmath as mp

from .config import DEFAULT_CTX, DEFAULT_MB, MBConfig, PrecisionContext
from .errors import (
    OnSingularHyperplane,
    OrderCapExceeded,
    OutOfDomain,
    PrecisionUnreachable,
    RegionViolation,
)
from . import zeta1
from .jets import jet_exp, jet_mul, jet_recip, jet_scale
from .laurent import FractionTerm, LaurentExpansion, LinearFactor
from .series import _choose_cutoffs, ez_deriv_full, ez_taylor

_DETECT = mp.mpf("1e-9")  # closeness that counts as "on" a hyperplane
_INNER_TERM_CAP = 40_000  # series budget before falling back to recursion
_LINE_TERM_CAP = 150  # per-node series budget inside the integrand


# ---------------------------------------------------------------------------
# hyperplanes, contour bookkeeping
# ---------------------------------------------------------------------------

def _near_int(x):
    x = mp.mpc(x)
    if abs(mp.im(x)) > _DETECT:
        return None
    n = int(mp.nint(mp.re(x)))
    return n if abs(mp.re(x) - n) < _DETECT else None


def singular_hyperplane(s):
    """Description of the singular hyperplane containing s, or None."""
    s = tuple(mp.mpc(x) for x in s)
    r = len(s)
    if r == 1:
        return "s1=1" if _near_int(s[0]) == 1 else None
    if _near_int(s[-1]) == 1:
        return f"s{r}=1"
    n = _near_int(s[-2] + s[-1])
    if n is not None and (n in (0, 1, 2) or (n < 0 and n % 2 == 0)):
        return f"s{r-1}+s{r}={n}"
    for j in range(1, r - 1):
        n = _near_int(sum(s[j - 1:], mp.mpc(0)))
        if n is not None and n <= r - j + 1:
            plus = "+".join(f"s{i}" for i in range(j, r + 1))
            return f"{plus}={n}"
    return None


def capital_m(m, r=None):
    """max_j (r - j - (m_j + ... + m_r)), the contour-offset threshold."""
    m = tuple(m)
    r = len(m) if r is None else int(r)
    if len(m) != r:
        raise ValueError("point arity does not match depth")
    best = None
    acc = 0
    for j in range(r, 0, -1):
        acc += m[j - 1]
        v = r - j - acc
        best = v if best is None else max(best, v)
    return int(best)


def region_ok(s, M, eta) -> bool:
    """Strict check of Re(s_j+...+s_r) > r - j - M + eta for every j."""
    s = tuple(mp.mpc(x) for x in s)
    r = len(s)
    acc = mp.mpf(0)
    for j in range(r, 0, -1):
        acc += mp.re(s[j - 1])
        if not acc > r - j - M + eta:
            return False
    return True


def _nearest_integer_point(s):
    return tuple(int(mp.nint(mp.re(x))) for x in s)


def _line_feasible(sig, M, eta, tol, order) -> bool:
    """Can the depth-(r-1) integrand factor be summed cheaply on the line?"""
    r = len(sig)
    inner = list(sig[: r - 2]) + [sig[r - 2] + sig[r - 1] + M - eta]
    if len(inner) == 1:
        return inner[0] > 1.5
    try:
        _choose_cutoffs(inner, (order,) * len(inner), tol / 16, _LINE_TERM_CAP)
    except (OutOfDomain, PrecisionUnreachable):
        return False
    return True


def choose_contour_m(s, ctx: PrecisionContext, cfg: MBConfig, order: int = 0) -> int:
    """Smallest admissible contour offset that also keeps the integrand cheap."""
    s = tuple(mp.mpc(x) for x in s)
    sig = [float(mp.re(x)) for x in s]
    M = max(capital_m(_nearest_integer_point(s)) + 1, 1)
    tol = float(ctx.tol)
    while M <= 400:
        if region_ok(s, M, cfg.eta) and _line_feasible(sig, M, cfg.eta, tol, order):
            return M
        M += 1
    raise PrecisionUnreachable("no workable contour offset below 400")


# ---------------------------------------------------------------------------
# certified vertical-line quadrature
# ---------------------------------------------------------------------------

def _line_quadrature(f, ctx: PrecisionContext, cfg: MBConfig, tol):
    """(1/2π)∫ f(t) dt over the real line, componentwise on lists.

    Composite trapezoid with step halving until two successive levels agree;
    the integrand's exponential decay truncates each sweep, nodes are reused
    across levels, and geometric convergence of the level differences gives
    the certificate one level early.  Returns (values, certified bound).
    """
    # Trapezoid error decays like exp(-pi/h) here (nearest pole row sits at
    # distance 1/2 from the contour), so three levels h, h/2, h/4 give level
    # differences ~exp(-pi/h), ~exp(-2pi/h) and an extrapolated bound
    # ~exp(-3pi/h).  Pick the coarsest h whose extrapolated bound clears tol.
    x = mp.log(4096 / mp.mpf(tol)) / 3
    h = min(mp.mpf(cfg.initial_step) * 2, mp.pi / x)
    T = -mp.log(mp.mpf(tol)) / mp.pi + 10
    cut = mp.mpf(tol) / 64
    cache: dict = {}

    def F(t):
        v = cache.get(t)
        if v is None:
            v = f(t)
            cache[t] = v
        return v

    prev = None
    prev_delta = None
    for _ in range(cfg.max_refinements + 1):
        K = int(mp.ceil(T / h))
        acc = list(F(mp.mpf(0)))
        quiet = 0
        for k in range(1, K + 1):
            t = mp.mpf(k) * h
            vp, vm = F(t), F(-t)
            mag = 0
            for i in range(len(acc)):
                acc[i] = acc[i] + vp[i] + vm[i]
                m = abs(vp[i]) + abs(vm[i])
                if m > mag:
                    mag = m
            quiet = quiet + 1 if mag * (2 * K + 1) < cut else 0
            if quiet >= 3:
                break
        scale = h / (2 * mp.pi)
        cur = [x * scale for x in acc]
        if prev is not None:
            delta = max(abs(a - b) for a, b in zip(cur, prev))
            if delta < tol:
                return cur, 4 * delta
            if prev_delta is not None and delta < prev_delta:
                est = delta * delta / prev_delta
                if est * 16 < tol:
                    return cur, 16 * est
            prev_delta = delta
        prev = cur
        h = h / 2
        T = T + 2
    raise PrecisionUnreachable("line quadrature did not stabilize")


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------

def _analytic_eval(s, ctx: PrecisionContext, cfg: MBConfig):
    """Value of zeta_{r'} at an analytic point: cheap series if possible."""
    try:
        return ez_deriv_full(
            (0,) * len(s), s, ctx, term_cap=_INNER_TERM_CAP
        )[0]
    except (OutOfDomain, PrecisionUnreachable):
        return ez_eval_mb(s, ctx=ctx, cfg=cfg)


def _binom_scalar(a, k):
    acc = mp.mpc(1)
    for i in range(k):
        acc = acc * (a - i)
    return acc / mp.factorial(k)


_GZ_CACHE: dict = {}


def _gz(z):
    """Gamma(-z) * zeta(-z), memoized per node and working precision."""
    key = (z, mp.mp.prec)
    v = _GZ_CACHE.get(key)
    if v is None:
        if len(_GZ_CACHE) > 200000:
            _GZ_CACHE.clear()
        v = mp.gamma(-z) * mp.zeta(-z)
        _GZ_CACHE[key] = v
    return v


def mb_integral(s, alpha, ctx: PrecisionContext = DEFAULT_CTX,
                cfg: MBConfig = DEFAULT_MB):
    """The vertical-line integral over Re z = alpha, certified by halving."""
    s = tuple(mp.mpc(x) for x in s)
    r = len(s)
    if r < 2:
        raise ValueError("the contour integral needs depth >= 2")
    alpha = mp.mpf(alpha)
    with ctx.working():
        # analyticity requires Re(s_j+...+s_r) > r - j - alpha for all j
        if not region_ok(s, alpha, 0):
            raise RegionViolation(
                f"contour at Re z = {alpha} is not admissible for this point"
            )
        w = s[-2] + s[-1]
        prefix = s[: r - 2]

        if r == 2:
            def inner(u):
                return mp.zeta(u)
        else:
            def inner(u):
                return _analytic_eval(prefix + (u,), ctx, cfg)

        def f(t):
            z = mp.mpc(alpha, t)
            return [mp.gamma(s[-1] + z) * _gz(z) * inner(w + z)]

        val, _ = _line_quadrature(f, ctx, cfg, float(ctx.tol) / 4)
        out = +val[0]
    return out


def integral_branch(s, ctx: PrecisionContext = DEFAULT_CTX,
                    cfg: MBConfig = DEFAULT_MB, M=None):
    """The assembled last branch I(s; M-eta) / Gamma(s_r)."""
    s = tuple(mp.mpc(x) for x in s)
    if M is None:
        M = choose_contour_m(s, ctx, cfg)
    with ctx.working():
        out = +(mb_integral(s, M - cfg.eta, ctx, cfg) / mp.gamma(s[-1]))
    return out


def ez_eval_mb(s, r=None, ctx: PrecisionContext = DEFAULT_CTX,
               cfg: MBConfig = DEFAULT_MB, M=None):
    """zeta_r(s) anywhere off the singular hyperplanes, by contour recursion."""
    s = tuple(mp.mpc(x) for x in s)
    if r is not None and len(s) != r:
        raise ValueError("point arity does not match depth")
    r = len(s)
    hp = singular_hyperplane(s)
    if hp is not None:
        raise OnSingularHyperplane(hp)
    if r == 1:
        return zeta1.zeta(s[0], ctx)
    with ctx.working():
        if M is None:
            M = choose_contour_m(s, ctx, cfg)
        elif not region_ok(s, M, cfg.eta):
            raise RegionViolation(
                f"contour offset M={M} is not admissible for this point"
            )
        w = s[-2] + s[-1]
        prefix = s[: r - 2]
        out = _analytic_eval(prefix + (w - 1,), ctx, cfg) / (s[-1] - 1)
        for k in range(M):
            if k >= 2 and k % 2 == 0:
                continue  # zeta(-k) = 0
            out += (
                _binom_scalar(-s[-1], k)
                * _analytic_eval(prefix + (w + k,), ctx, cfg)
                * zeta1.zeta(-k, ctx)
            )
        out += mb_integral(s, M - cfg.eta, ctx, cfg) / mp.gamma(s[-1])
        out = +out
    return out


# ---------------------------------------------------------------------------
# gamma jets
# ---------------------------------------------------------------------------

def loggamma_jet(a, order: int):
    out = [mp.loggamma(a)]
    fact = mp.mpf(1)
    for p in range(1, order + 1):
        fact *= p
        out.append(mp.psi(p - 1, a) / fact)
    return out


def gamma_jet(a, order: int):
    """Jet of Gamma(a + eps); a must be off the poles."""
    lg = loggamma_jet(a, order)
    return jet_scale(jet_exp([mp.mpc(0)] + lg[1:], order), mp.exp(lg[0]))


def rgamma_jet(a, order: int):
    """Jet of 1/Gamma(a + eps), valid at every center including the poles."""
    n = _near_int(a)
    if n is not None and n <= 0:
        # reflection: 1/Gamma(s) = Gamma(1-s) sin(pi s) / pi at s = n + eps
        g = gamma_jet(1 - n, order)
        g = [c if i % 2 == 0 else -c for i, c in enumerate(g)]  # eps -> -eps
        sj = [mp.mpc(0)] * (order + 1)
        sign = 1 if n % 2 == 0 else -1
        for k in range(1, order + 1, 2):
            sj[k] = sign * (-1) ** ((k - 1) // 2) * mp.pi ** (k - 1) / mp.factorial(k)
        return jet_mul(g, sj, order)
    lg = loggamma_jet(a, order)
    return jet_scale(
        jet_exp(jet_scale([mp.mpc(0)] + lg[1:], -1), order), mp.exp(-lg[0])
    )


def binom_jet(m_r: int, k: int, order: int):
    """Jet in eps of C(-m_r - eps, k)."""
    out = [mp.mpc(1)]
    for i in range(k):
        out = jet_mul(out, [mp.mpc(-m_r - i), mp.mpc(-1)], order)
    return jet_scale(out, 1 / mp.factorial(k))


def redistribute_merged_variable(a: int):
    """Binomial row distributing (eps_{r-1} + eps_r)^a over the two offsets."""
    if a < 0:
        raise ValueError("exponent must be >= 0")
    return [math.comb(a, n) for n in range(a + 1)]


# ---------------------------------------------------------------------------
# expansions at integer centers
# ---------------------------------------------------------------------------

_EXPAND_CACHE: dict = {}


def _lift(sub: LaurentExpansion, shift: int, order: int):
    """Map a depth-(r-1) expansion in the merged last variable to r variables.

    The merged variable is u = s_{r-1} + s_r + shift; its offset becomes
    eps_{r-1} + eps_r (binomially redistributed) and each denominator factor
    s'(j, r-1) - c becomes s(j, r) - (c - shift).
    """
    out = []
    for t in sub.terms:
        den = tuple(LinearFactor(f.j, f.c - shift) for f in t.denominator)
        num: dict = {}
        for idx, v in t.numerator.items():
            head, a = idx[:-1], idx[-1]
            for n, b in enumerate(redistribute_merged_variable(a)):
                key = head + (n, a - n)
                if sum(key) <= order:
                    num[key] = num.get(key, mp.mpc(0)) + b * v
        out.append(FractionTerm(den, num))
    return out


def _term_mul_jet(t: FractionTerm, jet, vi: int, order: int) -> FractionTerm:
    num: dict = {}
    for idx, v in t.numerator.items():
        for p, c in enumerate(jet):
            if c == 0:
                continue
            key = idx[:vi] + (idx[vi] + p,) + idx[vi + 1:]
            if sum(key) <= order:
                num[key] = num.get(key, mp.mpc(0)) + v * c
    return FractionTerm(t.denominator, num)


def _integral_jet(m, M: int, order: int, ctx: PrecisionContext, cfg: MBConfig):
    """Taylor numerator (r variables) of I(s; M-eta) / Gamma(s_r) at m."""
    r = len(m)
    alpha = M - cfg.eta
    w0 = m[-2] + m[-1]
    prefix = m[: r - 2]

    # fixed component ordering: inner multi-index (prefix..., merged) x gamma
    inner_universe = []

    def _gen(dims, total, cur):
        if not dims:
            inner_universe.append(tuple(cur))
            return
        for p in range(total + 1):
            _gen(dims - 1, total - p, cur + [p])

    _gen(r - 1, order, [])
    pairs = [
        (ii, g)
        for ii in inner_universe
        for g in range(order + 1 - sum(ii))
    ]

    def f(t):
        z = mp.mpc(alpha, t)
        c = _gz(z)
        g = gamma_jet(m[-1] + z, order)
        if r == 2:
            zj = zeta1.zeta_jet(w0 + z, order, ctx)
            inner = {(a,): zj[a] for a in range(order + 1)}
        else:
            inner, _ = ez_taylor(
                prefix + (w0 + z,), order, ctx,
                abs_tol=float(ctx.tol) / 10, term_cap=_INNER_TERM_CAP,
            )
        return [c * inner.get(ii, mp.mpc(0)) * g[gg] for ii, gg in pairs]

    vals, _ = _line_quadrature(f, ctx, cfg, float(ctx.tol) / 10)
    rg = rgamma_jet(mp.mpf(m[-1]), order)

    num: dict = {}
    for (ii, gg), v in zip(pairs, vals):
        if v == 0:
            continue
        head, a = ii[:-1], ii[-1]
        row = redistribute_merged_variable(a)
        for p, cp in enumerate(rg):
            if cp == 0:
                continue
            for n, b in enumerate(row):
                key = head + (n, (a - n) + gg + p)
                if sum(key) <= order:
                    num[key] = num.get(key, mp.mpc(0)) + v * cp * b
    return num


def expand_at(m, order: int, ctx: PrecisionContext = DEFAULT_CTX,
              cfg: MBConfig = DEFAULT_MB) -> LaurentExpansion:
    """Extended Laurent expansion of zeta_r at any integer center.

    Runs the depth recursion on truncated jets.  At analytic centers every
    denominator list comes out empty (a plain Taylor polynomial); on
    singular hyperplanes the poles appear as linear factors.
    """
    m = tuple(int(x) for x in m)
    if order < 0:
        raise ValueError("order must be >= 0")
    if order > ctx.order_cap:
        raise OrderCapExceeded(
            f"order {order} exceeds the configured cap {ctx.order_cap}"
        )
    key = (m, order, ctx.digits, cfg.eta)
    hit = _EXPAND_CACHE.get(key)
    if hit is not None:
        return hit

    r = len(m)
    if r == 1:
        z = zeta1.laurent_at(m[0], order, ctx)
        terms = []
        if z.has_pole:
            terms.append(
                FractionTerm((LinearFactor(1, 1),), {(0,): mp.mpc(1)})
            )
        terms.append(
            FractionTerm((), {(p,): c for p, c in enumerate(z.coefficients)})
        )
        out = LaurentExpansion.of(m, order, ctx.digits, terms)
    else:
        with ctx.working():
            M = choose_contour_m(m, ctx, cfg, order)
            terms = []

            # simple-pole branch
            sub = expand_at(m[: r - 2] + (m[-2] + m[-1] - 1,), order, ctx, cfg)
            lifted = _lift(sub, -1, order)
            if m[-1] == 1:
                lifted = [
                    FractionTerm(t.denominator + (LinearFactor(r, 1),), t.numerator)
                    for t in lifted
                ]
            else:
                rj = jet_recip([mp.mpc(m[-1] - 1), mp.mpc(1)], order)
                lifted = [_term_mul_jet(t, rj, r - 1, order) for t in lifted]
            terms.extend(lifted)

            # residue sum branch
            for k in range(M):
                if k >= 2 and k % 2 == 0:
                    continue  # zeta(-k) = 0
                sub = expand_at(
                    m[: r - 2] + (m[-2] + m[-1] + k,), order, ctx, cfg
                )
                bj = jet_scale(binom_jet(m[-1], k, order), zeta1.zeta(-k, ctx))
                terms.extend(
                    _term_mul_jet(t, bj, r - 1, order)
                    for t in _lift(sub, k, order)
                )

            # integral branch
            terms.append(FractionTerm((), _integral_jet(m, M, order, ctx, cfg)))
            out = LaurentExpansion.of(m, order, ctx.digits, terms)

    if len(_EXPAND_CACHE) > 256:
        _EXPAND_CACHE.clear()
    _EXPAND_CACHE[key] = out
    return out


def expand_nonpositive(m, order: int, ctx: PrecisionContext = DEFAULT_CTX,
                       cfg: MBConfig = DEFAULT_MB) -> LaurentExpansion:
    """Expansion at an integer center with at least one coordinate <= 0."""
    m = tuple(int(x) for x in m)
    if len(m) < 2:
        raise ValueError("depth must be >= 2; depth 1 is the classical case")
    if all(x >= 1 for x in m):
        raise ValueError("center is positive; use the positive-point engine")
    return expand_at(m, order, ctx, cfg)


# ---------------------------------------------------------------------------
# the integrand family F and its derivatives
# ---------------------------------------------------------------------------

def f_deriv(n, k, z, l=None, ctx: PrecisionContext = DEFAULT_CTX,
            cfg: MBConfig = DEFAULT_MB):
    """Partial derivative of Gamma(s_l+z)/Gamma(s_l) * zeta_{l-1}(.., s_{l-1}+s_l+z).

    ``n`` is the derivative multi-index, ``k`` the (integer) expansion
    center, ``z`` the fixed contour variable.  Derivatives come from jet
    composition: a 1-D gamma-ratio jet in the last offset times the
    depth-(l-1) Taylor table in the remaining offsets, with the merged
    variable redistributed binomially.
    """
    n = tuple(int(x) for x in n)
    k = tuple(int(x) for x in k)
    if l is not None and len(k) != l:
        raise ValueError("point arity does not match depth")
    l = len(k)
    if len(n) != l or l < 2:
        raise ValueError("need a depth >= 2 multi-index matching the center")
    z = mp.mpc(z)
    N = sum(n)
    with ctx.working():
        g = jet_mul(gamma_jet(k[-1] + z, N), rgamma_jet(mp.mpf(k[-1]), N), N)
        if l == 2:
            zj = zeta1.zeta_jet(k[0] + k[1] + z, N, ctx)
            inner = {(a,): zj[a] for a in range(N + 1)}
        else:
            inner, _ = ez_taylor(
                k[: l - 2] + (k[-2] + k[-1] + z,), N, ctx,
                abs_tol=float(ctx.tol) / 10,
            )
        pre, n1, n2 = n[: l - 2], n[l - 2], n[l - 1]
        acc = mp.mpc(0)
        for a in range(n1, N + 1):
            p = n2 - (a - n1)
            if p < 0 or p >= len(g):
                continue
            v = inner.get(pre + (a,), mp.mpc(0))
            if v == 0:
                continue
            acc += v * math.comb(a, n1) * g[p]
        fact = mp.mpf(1)
        for x in n:
            fact *= mp.factorial(x)
        out = +(acc * fact)
    return out
