"""Laurent expansions at positive integer centers and derived constants.

The expansion at a positive integer center is built by the product-rewrite
recursion: a center with its last entry above 1 is an interior Taylor case;
the all-ones center has the closed pole structure with the multiple
Stieltjes coefficients; any other center isolates the target inside the
interleaving decomposition of a two-chain product and recurses on the
remaining terms, whose pivots move strictly rightward.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Tuple

import mpmath as mp

from .config import PrecisionContext, MBConfig, DEFAULT_CTX, DEFAULT_MB
from .errors import (
    NotPositive,
    OrderCapExceeded,
    ConsistencyFailure,
    PrecisionUnreachable,
)
from .jets import Laurent1D
from .laurent import LinearFactor, FractionTerm, LaurentExpansion, poly_mul
from .stuffle import (
    AffineForm,
    ZetaTerm,
    ZetaProduct,
    classify_case,
    isolate_target,
    expansion_plan,
    ALL_ONES,
)
from . import mb
from . import zeta1


# Interior Taylor leaves of depth >= 3 carry no pole numerators, only the
# analytic tail of the expansion, so they are computed at this reduced
# precision to keep the contour recursion affordable.
_DEEP_LEAF_DIGITS = 15

_TERM_CACHE: Dict[tuple, LaurentExpansion] = {}


def _leaf_ctx(ctx: PrecisionContext, depth: int, center) -> PrecisionContext:
    if depth >= 3 and any(c != 1 for c in center) and ctx.digits > _DEEP_LEAF_DIGITS:
        return PrecisionContext(
            digits=_DEEP_LEAF_DIGITS,
            term_budget=ctx.term_budget,
            order_cap=ctx.order_cap,
        )
    return ctx


def _suffix_form(args, j: int) -> AffineForm:
    acc = args[j]
    for a in args[j + 1:]:
        acc = acc.merge(a)
    return acc


def _ambient_factor(args, j_local: int, c_local: int, r: int) -> LinearFactor:
    """Map a leaf-variable pole factor to an ambient trailing-block factor."""
    form = _suffix_form(args, j_local - 1)
    coeffs = form.coeffs
    support = [i for i, c in enumerate(coeffs) if c]
    j_amb = support[0] + 1
    expected = tuple(
        1 if i >= support[0] else 0 for i in range(r)
    )
    if coeffs != expected:
        raise ConsistencyFailure(
            "pole factor is not a trailing block of the ambient variables"
        )
    return LinearFactor(j_amb, c_local - form.shift)


def _compose(local: LaurentExpansion, args, m, order: int,
             digits: int) -> LaurentExpansion:
    """Push a leaf expansion through affine arguments into ambient variables."""
    r = len(m)
    d = len(args)
    # linear deviation of each leaf variable as an ambient polynomial
    linear = []
    for a in args:
        poly = {}
        for i, c in enumerate(a.coeffs):
            if c:
                poly[tuple(1 if k == i else 0 for k in range(r))] = mp.mpf(c)
        linear.append(poly)
    terms = []
    for t in local.terms:
        den = tuple(
            _ambient_factor(args, f.j, f.c, r) for f in t.denominator
        )
        num: Dict[tuple, object] = {}
        for n, coeff in t.numerator.items():
            poly = {(0,) * r: mp.mpc(coeff)}
            for i in range(d):
                for _ in range(n[i]):
                    poly = poly_mul(poly, linear[i], order)
            for k, v in poly.items():
                num[k] = num.get(k, mp.mpc(0)) + v
        terms.append(FractionTerm(den, num))
    return LaurentExpansion.of(m, order, digits, terms)


def _expand_term(term: ZetaTerm, m, order: int, ctx: PrecisionContext,
                 cfg: MBConfig) -> LaurentExpansion:
    """Ambient expansion of one nested-zeta symbol (sign ignored)."""
    key = (term.with_sign(1).key(), tuple(m), order, ctx.digits, cfg.eta)
    hit = _TERM_CACHE.get(key)
    if hit is not None:
        return hit

    center = term.center(m)
    case = classify_case(center)
    d = term.depth
    if case == ALL_ONES or case == f"C_{d}" or d == 1:
        lctx = _leaf_ctx(ctx, d, center)
        local = mb.expand_at(center, order, lctx, cfg)
        out = _compose(local, term.args, m, order, ctx.digits)
    else:
        j = int(case[2:])
        left = ZetaTerm(term.args[:j])
        right = ZetaTerm(term.args[j:])
        expr = isolate_target(ZetaProduct(left, right), term.with_sign(1))
        out = None
        for t in expr.terms:
            if isinstance(t, ZetaProduct):
                piece = (
                    _expand_term(t.left, m, order, ctx, cfg)
                    * _expand_term(t.right, m, order, ctx, cfg)
                )
                piece = piece if t.sign == 1 else piece.scale(-1)
            else:
                piece = _expand_term(t.with_sign(1), m, order, ctx, cfg)
                piece = piece if t.sign == 1 else piece.scale(-1)
            out = piece if out is None else out + piece
    if len(_TERM_CACHE) > 512:
        _TERM_CACHE.clear()
    _TERM_CACHE[key] = out
    return out


def expand_positive(m, order: int, ctx: PrecisionContext = DEFAULT_CTX,
                    cfg: MBConfig = DEFAULT_MB) -> LaurentExpansion:
    """Extended Laurent expansion at a positive integer center.

    The rewrite plan for the center is available separately through
    ``stuffle.expansion_plan``; this executes it.
    """
    m = tuple(int(x) for x in m)
    if any(x < 1 for x in m):
        raise NotPositive("all center coordinates must be >= 1")
    if order > ctx.order_cap:
        raise OrderCapExceeded(
            f"order {order} exceeds the configured cap {ctx.order_cap}"
        )
    r = len(m)
    root = ZetaTerm(tuple(AffineForm.variable(i, r) for i in range(r)))
    with ctx.working():
        return _expand_term(root, m, order, ctx, cfg)


def _ones_prefactor_denominator(r: int) -> Tuple[LinearFactor, ...]:
    return tuple(LinearFactor(k, r - k + 1) for k in range(2, r + 1))


def _factor_linear(f: LinearFactor, r: int) -> Dict[tuple, object]:
    """At the all-ones center the factor s(j,r) - (r-j+1) is a pure sum of
    deviations; as an ambient polynomial in the deviations."""
    return {
        tuple(1 if k == i else 0 for k in range(r)): mp.mpf(1)
        for i in range(f.j - 1, r)
    }


def _divide_by_full_sum(Q: Dict[tuple, object], r: int):
    """Exact division of a polynomial by eps_1 + ... + eps_r.

    Returns (quotient, remainder); the remainder is Q with eps_1 replaced by
    minus the sum of the others, and vanishes when Q is divisible.
    """
    layers: Dict[int, Dict[tuple, object]] = {}
    for k, v in Q.items():
        layers.setdefault(k[0], {})[k[1:]] = v
    quot: Dict[tuple, object] = {}
    amax = max(layers) if layers else 0
    for a in range(amax, 0, -1):
        cur = layers.get(a, {})
        for mu, v in cur.items():
            if v == 0:
                continue
            quot[(a - 1,) + mu] = quot.get((a - 1,) + mu, mp.mpc(0)) + v
            below = layers.setdefault(a - 1, {})
            for i in range(r - 1):
                shifted = tuple(
                    m + (1 if k == i else 0) for k, m in enumerate(mu)
                )
                below[shifted] = below.get(shifted, mp.mpc(0)) - v
    remainder = {
        (0,) + mu: v for mu, v in layers.get(0, {}).items() if v != 0
    }
    return quot, remainder


_ONES_G_CACHE: Dict[tuple, Dict[tuple, object]] = {}


def _ones_g_poly(r: int, order: int, ctx: PrecisionContext,
                 cfg: MBConfig) -> Dict[tuple, object]:
    """Taylor polynomial of the analytic coefficient function at all ones.

    Multiplies the expansion by the full pole prefactor, subtracts the
    1/(eps_1+...+eps_r) term, and divides the leftover pole part exactly.
    """
    key = (r, order, ctx.digits, cfg.eta)
    hit = _ONES_G_CACHE.get(key)
    if hit is not None:
        return hit
    with ctx.working():
        E = mb.expand_at((1,) * r, order + 1, ctx, cfg)
        chain = _ones_prefactor_denominator(r)
        lead = LinearFactor(1, r)
        allowed = set(chain) | {lead}
        P: Dict[tuple, object] = {}
        Q: Dict[tuple, object] = {}
        for t in E.terms:
            if not set(t.denominator) <= allowed:
                raise ConsistencyFailure(
                    "unexpected pole factor in the all-ones expansion"
                )
            poly = dict(t.numerator)
            for f in chain:
                if f not in t.denominator:
                    poly = poly_mul(poly, _factor_linear(f, r), order + 1)
            target = Q if lead in t.denominator else P
            for k, v in poly.items():
                target[k] = target.get(k, mp.mpc(0)) + v
        z = (0,) * r
        Q[z] = Q.get(z, mp.mpc(0)) - 1
        quot, rem = _divide_by_full_sum(Q, r)
        scale = max((abs(v) for v in Q.values()), default=mp.mpf(1))
        for v in rem.values():
            if abs(v) > 1000 * ctx.tol * max(scale, 1):
                raise ConsistencyFailure(
                    "the subtracted pole term does not divide out; the "
                    "expansion is inconsistent with the closed pole structure"
                )
        G: Dict[tuple, object] = {}
        for src in (P, quot):
            for k, v in src.items():
                if sum(k) <= order and v != 0:
                    G[k] = G.get(k, mp.mpc(0)) + v
    if len(_ONES_G_CACHE) > 64:
        _ONES_G_CACHE.clear()
    _ONES_G_CACHE[key] = G
    return G


def multiple_stieltjes(n, ctx: PrecisionContext = DEFAULT_CTX,
                       cfg: MBConfig = DEFAULT_MB):
    """The multi-index Stieltjes coefficient at the all-ones center.

    These are the Taylor coefficients of the function left after multiplying
    by the full pole prefactor and subtracting the 1/(s_1+...+s_r - r) term.
    """
    n = tuple(int(x) for x in n)
    if any(x < 0 for x in n):
        raise ValueError("indices must be non-negative")
    r = len(n)
    order = sum(n)
    if order > ctx.order_cap:
        raise OrderCapExceeded(
            f"order {order} exceeds the configured cap {ctx.order_cap}"
        )
    if r == 1:
        return zeta1.stieltjes(n[0], ctx)
    return _ones_g_poly(r, order, ctx, cfg).get(n, mp.mpc(0))


@dataclass(frozen=True)
class RestrictedExpansion:
    """One-variable expansion in (s-1) after identifying the coordinates
    equal to 1 with a common variable s (other coordinates stay fixed)."""

    center: tuple
    identified: Tuple[int, ...]
    order: int
    digits: int
    series: Laurent1D

    def coefficient(self, degree: int):
        return self.series.coefficient(degree)

    @property
    def min_degree(self):
        return self.series.min_degree

    def evaluate(self, s):
        return self.series.evaluate(mp.mpc(s) - 1)


def _restrict(E: LaurentExpansion, alphas, order: int) -> Laurent1D:
    """Substitute eps_i = alpha_i * w into an expansion, giving a 1-D jet."""
    total = None
    for t in E.terms:
        # numerator restricted to the line
        num = [mp.mpc(0)] * (order + 1)
        for n, coeff in t.numerator.items():
            deg = sum(n)
            if deg > order:
                continue
            c = mp.mpc(coeff)
            for a, p in zip(alphas, n):
                c *= mp.mpf(a) ** p
            num[deg] += c
        piece = Laurent1D(order, {k: v for k, v in enumerate(num) if v != 0})
        for f in t.denominator:
            const = sum(E.center[f.j - 1:]) - f.c
            slope = sum(alphas[f.j - 1:])
            if const == 0:
                if slope == 0:
                    raise ZeroDivisionError(
                        "restriction direction lies inside a pole hyperplane"
                    )
                piece = piece * Laurent1D(order, {-1: 1 / mp.mpf(slope)})
            else:
                fac = Laurent1D(
                    order, {0: mp.mpc(const), 1: mp.mpc(slope)}
                )
                piece = piece * fac.recip()
        total = piece if total is None else total + piece
    if total is None:
        total = Laurent1D(order, {})
    return total


def restricted_expand(m, order: int, ctx: PrecisionContext = DEFAULT_CTX,
                      cfg: MBConfig = DEFAULT_MB) -> RestrictedExpansion:
    """Expansion along the line where every coordinate equal to 1 is s."""
    m = tuple(int(x) for x in m)
    if any(x < 1 for x in m):
        raise NotPositive("all center coordinates must be >= 1")
    if order > ctx.order_cap:
        raise OrderCapExceeded(
            f"order {order} exceeds the configured cap {ctx.order_cap}"
        )
    if len(m) == 1 and m[0] == 1:
        zl = zeta1.laurent_at(1, order, ctx)
        series = Laurent1D(
            order,
            {-1: mp.mpf(1), **{i: c for i, c in enumerate(zl.coefficients)}},
        )
        return RestrictedExpansion(m, (1,), order, ctx.digits, series.prune())
    E = expand_positive(m, order, ctx, cfg)
    alphas = tuple(1 if x == 1 else 0 for x in m)
    if not any(alphas):
        alphas = (1,) * len(m)  # interior center: plain diagonal restriction
    with ctx.working():
        series = _restrict(E, alphas, order)
    identified = tuple(i + 1 for i, a in enumerate(alphas) if a)
    return RestrictedExpansion(m, identified, order, ctx.digits, series.prune())


def stieltjes_sum(N: int, r: int, ctx: PrecisionContext = DEFAULT_CTX,
                  cfg: MBConfig = DEFAULT_MB):
    """Sum of the multi-index Stieltjes coefficients of total order N.

    Computed two ways: directly from the all-ones expansion coefficients,
    and from the diagonal restriction; the two must agree.
    """
    N = int(N)
    r = int(r)
    if N < 0 or r < 1:
        raise ValueError("need N >= 0 and r >= 1")
    if N > ctx.order_cap:
        raise OrderCapExceeded(
            f"order {N} exceeds the configured cap {ctx.order_cap}"
        )
    if r == 1:
        return zeta1.stieltjes(N, ctx)
    with ctx.working():
        G = _ones_g_poly(r, N, ctx, cfg)
        direct = mp.mpc(0)
        for n in _compositions(N, r):
            direct += G.get(n, mp.mpc(0))
        restricted = restricted_expand((1,) * r, N, ctx, cfg)
        via_diag = mp.factorial(r - 1) * restricted.coefficient(N - (r - 1))
        if abs(direct - via_diag) > 10 * ctx.tol:
            raise ConsistencyFailure(
                f"composition sum {mp.nstr(direct, 12)} and diagonal "
                f"coefficient {mp.nstr(via_diag, 12)} disagree"
            )
        out = +via_diag
    return out


def _compositions(N: int, r: int):
    if r == 1:
        yield (N,)
        return
    for head in range(N + 1):
        for rest in _compositions(N - head, r - 1):
            yield (head,) + rest


def lemma1_pole_check(m, ctx: PrecisionContext = DEFAULT_CTX,
                      cfg: MBConfig = DEFAULT_MB, *, seed: int = 0) -> bool:
    """Numeric witness that the non-leading parts are analytic at m.

    Subtracts the explicit leading fraction (the zeta of the full variable
    sum over the chain of trailing-block pole factors); the remainder,
    multiplied by the widest pole product any residual part can carry,
    must stay bounded along random approach directions.
    """
    m = tuple(int(x) for x in m)
    if any(x < 1 for x in m):
        raise NotPositive("all center coordinates must be >= 1")
    r = len(m)
    rng = random.Random(seed)

    def remainder(s):
        lead = zeta1.zeta(sum(s) - (r - 1), ctx)
        for k in range(2, r + 1):
            lead /= sum(s[k - 1:]) - (r - k + 1)
        g = mb.ez_eval_mb(s, ctx=ctx, cfg=cfg) - lead
        for k in range(3, r + 1):
            g *= sum(s[k - 1:]) - (r - k + 1)
        return g

    with ctx.working():
        for _ in range(5):
            direction = [rng.uniform(0.5, 1.5) for _ in range(r)]
            vals = []
            for t in (mp.mpf("1e-2"), mp.mpf("1e-3")):
                s = tuple(mi + di * t for mi, di in zip(m, direction))
                try:
                    vals.append(abs(remainder(s)))
                except Exception:
                    return False
            if not vals[1] <= 4 * (vals[0] + 1):
                return False
    return True
