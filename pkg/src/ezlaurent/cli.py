"""Command-line front end: evaluation, expansions, constants, verification.

Exit codes: 0 success, 2 domain/region error (the offending hyperplane or
condition is named on stderr), 3 precision failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

import mpmath as mp

from . import engine, limits, mb, zeta1
from .config import MBConfig, PrecisionContext
from .errors import (
    EzlError,
    InvalidApproach,
    NotPositive,
    OnSingularHyperplane,
    OrderCapExceeded,
    OutOfDomain,
    PoleAt1,
    PrecisionUnreachable,
    RegionViolation,
    UnsupportedCenter,
)
from .laurent import format_complex
from .series import ez_value_full, in_domain
from .stuffle import stuffle_product

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64

_DOMAIN_ERRORS = (
    OnSingularHyperplane,
    OutOfDomain,
    RegionViolation,
    InvalidApproach,
    UnsupportedCenter,
    NotPositive,
    OrderCapExceeded,
    PoleAt1,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_scalar(text):
    text = text.strip()
    try:
        return mp.mpf(text)
    except Exception:
        pass
    try:
        z = complex(text.replace("i", "j"))
        return mp.mpc(z.real, z.imag)
    except Exception:
        raise _UsageError(f"cannot parse number {text!r}")


def _parse_tuple(text):
    parts = [p for p in text.split(",") if p.strip() != ""]
    if not parts:
        raise _UsageError("empty tuple argument")
    return tuple(_parse_scalar(p) for p in parts)


def _parse_int_tuple(text):
    vals = _parse_tuple(text)
    out = []
    for v in vals:
        if mp.im(v) != 0 or mp.re(v) != mp.nint(mp.re(v)):
            raise _UsageError(f"expected integer coordinates, got {text!r}")
        out.append(int(mp.nint(mp.re(v))))
    return tuple(out)


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=False))
    out.write("\n")


def _emit_csv(rows, out):
    out.write("multi_index,re,im\n")
    for idx, re_s, im_s in rows:
        out.write(f"{idx},{re_s},{im_s}\n")


def _value_payload(point, method, digits, value):
    return {
        "point": [str(x) for x in point],
        "depth": len(point),
        "method": method,
        "digits": digits,
        "value": format_complex(value, digits),
    }


def _cmd_eval(args, ctx):
    point = _parse_tuple(args.point)
    method = args.method
    if method == "auto":
        method = "series" if in_domain(point) else "mb"
    if method == "series":
        if not in_domain(point):
            raise OutOfDomain(
                "point is outside the domain of absolute convergence; "
                "use --method mb"
            )
        value = ez_value_full(point, ctx)[0]
    else:
        value = mb.ez_eval_mb(point, ctx=ctx)
    payload = _value_payload(point, method, ctx.digits, value)
    if args.format == "csv":
        _emit_csv([("", payload["value"][0], payload["value"][1])], sys.stdout)
    elif args.format == "text":
        re_s, im_s = payload["value"]
        print(f"zeta_{len(point)}({args.point}) = {re_s} + {im_s}i  [{method}]")
    else:
        _emit_json(payload, sys.stdout)
    return EXIT_OK


def _expansion_rows(E):
    rows = []
    for t in E.terms:
        den = " ".join(f"{f.j}:{f.c}" for f in t.denominator)
        for k in sorted(t.numerator):
            re_s, im_s = format_complex(t.numerator[k], E.digits)
            idx = ";".join(str(n) for n in k)
            rows.append((f"{den}|{idx}" if den else idx, re_s, im_s))
    return rows


def _cmd_expand(args, ctx):
    center = _parse_int_tuple(args.point)
    if len(center) == 1:
        L = zeta1.laurent_at(center[0], args.order, ctx)
        payload = {
            "center": list(center),
            "order": args.order,
            "digits": ctx.digits,
            "has_pole": L.has_pole,
            "coefficients": [format_complex(c, ctx.digits)
                             for c in L.coefficients],
        }
        rows = [(str(n), *format_complex(c, ctx.digits))
                for n, c in enumerate(L.coefficients)]
    else:
        if all(c >= 1 for c in center):
            E = engine.expand_positive(center, args.order, ctx)
        else:
            E = mb.expand_at(center, args.order, ctx)
        payload = E.to_json()
        rows = _expansion_rows(E)
    if args.format == "csv":
        _emit_csv(rows, sys.stdout)
    elif args.format == "text":
        for idx, re_s, im_s in rows:
            print(f"{idx}\t{re_s}\t{im_s}")
    else:
        _emit_json(payload, sys.stdout)
    return EXIT_OK


def _cmd_stieltjes(args, ctx):
    index = _parse_int_tuple(args.index)
    if any(n < 0 for n in index):
        raise _UsageError("Stieltjes indices must be non-negative")
    if len(index) == 1:
        value = zeta1.stieltjes(index[0], ctx)
    else:
        value = engine.multiple_stieltjes(index, ctx)
    payload = {
        "index": list(index),
        "depth": len(index),
        "digits": ctx.digits,
        "value": format_complex(value, ctx.digits),
    }
    if args.format == "csv":
        _emit_csv([(";".join(str(n) for n in index),
                    *payload["value"])], sys.stdout)
    elif args.format == "text":
        print(f"gamma_{tuple(index)} = {payload['value'][0]}")
    else:
        _emit_json(payload, sys.stdout)
    return EXIT_OK


def _cmd_restricted(args, ctx):
    center = _parse_int_tuple(args.point)
    R = engine.restricted_expand(center, args.order, ctx)
    degrees = sorted(R.series.coeffs)
    payload = {
        "center": list(center),
        "identified": list(R.identified),
        "order": R.order,
        "digits": ctx.digits,
        "coefficients": {
            str(d): format_complex(R.series.coeffs[d], ctx.digits)
            for d in degrees
        },
    }
    rows = [(str(d), *format_complex(R.series.coeffs[d], ctx.digits))
            for d in degrees]
    if args.format == "csv":
        _emit_csv(rows, sys.stdout)
    elif args.format == "text":
        for idx, re_s, im_s in rows:
            print(f"(s-1)^{idx}\t{re_s}\t{im_s}")
    else:
        _emit_json(payload, sys.stdout)
    return EXIT_OK


def _cmd_limits(args, ctx):
    center = _parse_int_tuple(args.point)
    eps = limits.ApproachSpec.of(*_parse_tuple(args.eps))
    if len(eps) != len(center):
        raise _UsageError("--eps arity must match --point arity")
    if len(center) == 2:
        if args.corollary:
            nv = limits.zeta2_corollary(center, eps, ctx)
        else:
            nv = limits.zeta2_near(center, eps, ctx)
    elif len(center) == 3:
        nv = limits.zeta3_near(center, eps, ctx)
    else:
        raise UnsupportedCenter("near-point formulas cover depths 2 and 3")
    if nv is limits.INDETERMINATE:
        payload = {
            "center": list(center),
            "eps": [str(e) for e in eps.offsets],
            "indeterminate": True,
        }
        if args.format == "text":
            print("indeterminate")
        else:
            _emit_json(payload, sys.stdout)
        return EXIT_OK
    payload = {
        "center": list(center),
        "eps": [str(e) for e in eps.offsets],
        "digits": ctx.digits,
        "principal_terms": [
            {"pole": t.pole, "value": format_complex(t.value, ctx.digits)}
            for t in nv.principal_terms
        ],
        "finite_part": format_complex(nv.finite_part, ctx.digits),
        "error_order": nv.error_order,
        "total": format_complex(nv.value(), ctx.digits),
    }
    if args.format == "csv":
        _emit_csv([("total", *payload["total"])], sys.stdout)
    elif args.format == "text":
        print(f"total = {payload['total'][0]} + {payload['total'][1]}i "
              f"({nv.error_order})")
    else:
        _emit_json(payload, sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _report(lines, name, ok, detail):
    lines.append((ok, f"{'PASS' if ok else 'FAIL'} {name}  {detail}"))


def _eval_stuffle_identity(j, r, s, ctx):
    """Residual of the splitting of zeta_j * zeta_{r-j} at the point s."""
    expr = stuffle_product(j, r)
    lhs = ez_value_full(s[:j], ctx)[0] * ez_value_full(s[j:], ctx)[0]
    rhs = mp.mpc(0)
    for term in expr.terms:
        args = tuple(a.evaluate(s) for a in term.args)
        rhs += term.sign * ez_value_full(args, ctx)[0]
    return abs(lhs - rhs)


def _suite_stuffle(ctx, lines):
    rng = random.Random(20260826)
    cases = [(1, 2, "harmonic"), (1, 3, "triple-left"),
             (2, 3, "triple-right"), (2, 4, "double-double")]
    for j, r, name in cases:
        worst = mp.mpf(0)
        for _ in range(3):
            # deep coordinates keep every rewritten term cheaply summable
            s = tuple(8.0 + 4 * rng.random() for _ in range(r))
            worst = max(worst, _eval_stuffle_identity(j, r, s, ctx))
        _report(lines, f"stuffle {name} (j={j}, r={r})",
                worst < ctx.tol * 100, f"residual={mp.nstr(worst, 3)}")
    try:
        from math import comb

        def delannoy(a, b):
            return sum(comb(a, k) * comb(b, k) * 2 ** k
                       for k in range(min(a, b) + 1))

        ok = True
        for r in range(2, 7):
            for j in range(1, r):
                n = len(stuffle_product(j, r).terms)
                if n != delannoy(j, r - j):
                    ok = False
        _report(lines, "stuffle term counts (r <= 6)", ok, "Delannoy")
    except Exception as exc:  # pragma: no cover
        _report(lines, "stuffle term counts (r <= 6)", False, repr(exc))


def _suite_lemma1(ctx, lines):
    ctx3 = PrecisionContext(digits=15)
    for m, c in [((1, 1), ctx), ((2, 1), ctx), ((3, 2), ctx),
                 ((1, 1, 1), ctx3)]:
        ok = engine.lemma1_pole_check(m, c)
        _report(lines, f"pole structure at {m}", ok, f"digits={c.digits}")


def _suite_remarks(ctx, lines):
    for n in range(3):
        a = engine.multiple_stieltjes((n, 0), ctx)
        b = zeta1.stieltjes(n, ctx)
        d = abs(a - b)
        _report(lines, f"gamma(({n},0)) = gamma_{n}", d < ctx.tol * 10,
                f"diff={mp.nstr(d, 3)}")
    # A0 slice reconstructs zeta on |s1 - 1| = 1/4
    G = engine._ones_g_poly(2, 4, ctx, MBConfig())
    worst = mp.mpf(0)
    for k in range(4):
        e1 = mp.mpf(1) / 4 * mp.exp(2j * mp.pi * k / 4 + 0.3j)
        a0 = sum(G.get((n1, 0), mp.mpc(0)) * e1 ** n1 for n1 in range(5))
        target = mp.zeta(1 + e1) - 1 / e1
        worst = max(worst, abs(a0 - target))
    _report(lines, "A0 slice matches zeta on |s1-1|=1/4",
            worst < mp.mpf("1e-4"), f"max diff={mp.nstr(worst, 3)} "
            "(order-4 truncation at radius 1/4)")


def _suite_corollary(ctx, lines):
    t = mp.mpf("1e-3")
    for m in [(0, 0), (-1, 0), (0, -1)]:
        eps = limits.ApproachSpec.of(t, mp.mpf("0.6") * t)
        nv = limits.zeta2_corollary(m, eps, ctx)
        s = (m[0] + eps[0], m[1] + eps[1])
        ref = mb.ez_eval_mb(s, ctx=ctx)
        d = abs(nv.value() - ref)
        _report(lines, f"corollary formula at {m}", d < 100 * t,
                f"residual={mp.nstr(d, 3)} (O(|eps|))")
    for lam_num, lam_den in [(1, 2), (1, 3), (1, 1)]:
        lam = mp.mpf(lam_num) / lam_den
        e2 = lam * t
        e1 = t - e2
        nv = limits.zeta2_corollary((0, 0), limits.ApproachSpec.of(e1, e2),
                                    ctx)
        d = abs(nv.value() - (mp.mpf(1) / 3 + lam / 12))
        _report(lines, f"direction family 1/3 + lambda/12, lambda={lam_num}/"
                f"{lam_den}", d < 100 * t, f"residual={mp.nstr(d, 3)}")


def _suite_mb_closure(ctx, lines):
    rng = random.Random(4)
    worst = mp.mpf(0)
    for _ in range(3):
        s = (1.0 + 4 * rng.random(), 2.0 + 4 * rng.random())
        d = abs(mb.ez_eval_mb(s, ctx=ctx) - ez_value_full(s, ctx)[0])
        worst = max(worst, d)
    _report(lines, "series vs contour recursion (depth 2)",
            worst < ctx.tol * 100, f"max diff={mp.nstr(worst, 3)}")
    s = (2.5, 3.5)
    M = mb.choose_contour_m(s, ctx, MBConfig())
    d = abs(mb.ez_eval_mb(s, ctx=ctx) - mb.ez_eval_mb(s, ctx=ctx, M=M + 1))
    _report(lines, "contour shift M vs M+1 (depth 2)", d < ctx.tol * 100,
            f"diff={mp.nstr(d, 3)}")
    ctx3 = PrecisionContext(digits=min(ctx.digits, 26))
    worst = mp.mpf(0)
    for _ in range(2):
        s = (1.0 + 5 * rng.random(), 1.0 + 5 * rng.random(),
             8.0 + 2 * rng.random())
        d = abs(mb.ez_eval_mb(s, ctx=ctx3) - ez_value_full(s, ctx3)[0])
        worst = max(worst, d)
    _report(lines, "series vs contour recursion (depth 3)",
            worst < ctx3.tol * 100, f"max diff={mp.nstr(worst, 3)}")


def _suite_limits(ctx, lines):
    resids = []
    for t in [mp.mpf("1e-3"), mp.mpf("5e-4"), mp.mpf("2.5e-4")]:
        eps = limits.ApproachSpec.of(t, t)
        nv = limits.zeta2_near((2, 0), eps, ctx)
        ref = mb.ez_eval_mb((2 + t, 0 + t), ctx=ctx)
        resids.append(abs(nv.value() - ref))
    shrinking = all(resids[i + 1] < resids[i] * 0.75
                    for i in range(len(resids) - 1))
    _report(lines, "near-point residual shrinks linearly at (2,0)",
            shrinking, f"residuals={[mp.nstr(x, 3) for x in resids]}")
    out = limits.zeta3_near((1, 0, 1), limits.ApproachSpec.of(
        mp.mpf("1e-3"), mp.mpf("1e-3"), mp.mpf("1e-3")), ctx)
    _report(lines, "indeterminate center (1,0,1) detected",
            out is limits.INDETERMINATE, repr(out))


_SUITES = {
    "stuffle": _suite_stuffle,
    "lemma1": _suite_lemma1,
    "remarks": _suite_remarks,
    "corollary": _suite_corollary,
    "mb-closure": _suite_mb_closure,
    "limits": _suite_limits,
}


def _cmd_verify(args, ctx):
    lines = []
    with ctx.working():  # glue arithmetic must not round below the library
        _SUITES[args.suite](ctx, lines)
    ok = True
    for passed, text in lines:
        ok = ok and passed
        print(text)
    print(f"{'ALL PASS' if ok else 'FAILURES PRESENT'} "
          f"({sum(1 for p, _ in lines if p)}/{len(lines)})")
    return EXIT_OK if ok else 1


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser():
    p = _Parser(prog="ezl", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, order=False):
        sp.add_argument("--digits", type=int, default=None,
                        help="working precision in decimal digits (>= 15)")
        sp.add_argument("--format", choices=["json", "csv", "text"],
                        default="json")
        if order:
            sp.add_argument("--order", type=int, default=2)

    sp = sub.add_parser("eval", help="evaluate zeta_r at a point")
    sp.add_argument("--point", required=True)
    sp.add_argument("--method", choices=["series", "mb", "auto"],
                    default="auto")
    common(sp)

    sp = sub.add_parser("expand", help="Laurent expansion at an integer point")
    sp.add_argument("--point", required=True)
    common(sp, order=True)

    sp = sub.add_parser("stieltjes", help="(multiple) Stieltjes constant")
    sp.add_argument("--index", required=True)
    common(sp)

    sp = sub.add_parser("restricted",
                        help="one-variable restricted expansion")
    sp.add_argument("--point", required=True)
    common(sp, order=True)

    sp = sub.add_parser("limits", help="near-point formula at a singular "
                        "integer center")
    sp.add_argument("--point", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--corollary", action="store_true",
                    help="use the doubly non-positive corollary formula")
    common(sp)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=sorted(_SUITES))
    common(sp)
    return p


_VERBS = {
    "eval": _cmd_eval,
    "expand": _cmd_expand,
    "stieltjes": _cmd_stieltjes,
    "restricted": _cmd_restricted,
    "limits": _cmd_limits,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        digits = args.digits
        if digits is None:
            digits = int(os.environ.get("EZL_DIGITS", "30"))
        if digits < 15:
            raise _UsageError("--digits must be at least 15")
        ctx = PrecisionContext(digits=digits)
        return _VERBS[args.verb](args, ctx)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionUnreachable as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except _DOMAIN_ERRORS as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except EzlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
