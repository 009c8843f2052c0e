"""Formal harmonic-product (quasi-shuffle) rewriting of nested zeta values.

Terms are depth-``d`` zeta symbols whose arguments are affine forms in the
ambient variables s_1..s_r.  The product of two such symbols decomposes into
the sum over all interleavings-with-merges of the two argument chains; this
module builds those decompositions, isolates a chosen term from one, and
turns the rewriting into an executable expansion plan whose leaves are
Taylor-expandable, expandable at the all-ones point, or of strictly lower
depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import mpmath as mp

from .errors import NotPositive, TargetAbsent, TargetAmbiguous


# ---------------------------------------------------------------------------
# expression types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class AffineForm:
    """Sum of ambient variables (0/1 coefficients in practice) plus a shift."""

    coeffs: tuple
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not any(self.coeffs):
            raise ValueError("affine argument must involve a variable")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("variable coefficients must be non-negative")

    @staticmethod
    def variable(i: int, nvars: int, shift: int = 0) -> "AffineForm":
        return AffineForm(tuple(1 if k == i else 0 for k in range(nvars)), shift)

    def merge(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.shift + other.shift,
        )

    def shifted(self, by: int) -> "AffineForm":
        return AffineForm(self.coeffs, self.shift + by)

    def evaluate(self, point):
        acc = mp.mpf(self.shift)  # exact accumulation at working precision
        for c, x in zip(self.coeffs, point):
            if c:
                acc = acc + c * mp.mpmathify(x)
        return acc

    @property
    def support(self):
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    def to_json(self):
        return {"coeffs": list(self.coeffs), "shift": self.shift}

    @staticmethod
    def from_json(obj) -> "AffineForm":
        return AffineForm(tuple(obj["coeffs"]), int(obj["shift"]))


@dataclass(frozen=True)
class ZetaTerm:
    """One signed nested-zeta symbol zeta_d(args)."""

    args: tuple
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("a term needs at least one argument")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def depth(self) -> int:
        return len(self.args)

    def key(self):
        return (1, self.depth, tuple((a.coeffs, a.shift) for a in self.args))

    def with_sign(self, sign: int) -> "ZetaTerm":
        return ZetaTerm(self.args, sign)

    def negated(self) -> "ZetaTerm":
        return ZetaTerm(self.args, -self.sign)

    def center(self, m):
        return tuple(a.evaluate(m) for a in self.args)

    def to_json(self):
        return {
            "depth": self.depth,
            "args": [a.to_json() for a in self.args],
            "sign": self.sign,
        }

    @staticmethod
    def from_json(obj) -> "ZetaTerm":
        return ZetaTerm(
            tuple(AffineForm.from_json(a) for a in obj["args"]), int(obj["sign"])
        )


@dataclass(frozen=True)
class ZetaProduct:
    """A signed formal product of two nested-zeta symbols."""

    left: ZetaTerm
    right: ZetaTerm
    sign: int = 1

    def __post_init__(self):
        if self.left.sign != 1 or self.right.sign != 1:
            raise ValueError("product factors carry no sign of their own")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def depth(self) -> int:
        return self.left.depth + self.right.depth

    def key(self):
        return (0, self.left.key(), self.right.key())

    def with_sign(self, sign: int) -> "ZetaProduct":
        return ZetaProduct(self.left, self.right, sign)

    def negated(self) -> "ZetaProduct":
        return ZetaProduct(self.left, self.right, -self.sign)

    def to_json(self):
        return {
            "product": [self.left.to_json(), self.right.to_json()],
            "sign": self.sign,
        }

    @staticmethod
    def from_json(obj) -> "ZetaProduct":
        l, r = obj["product"]
        return ZetaProduct(
            ZetaTerm.from_json(l).with_sign(1),
            ZetaTerm.from_json(r).with_sign(1),
            int(obj["sign"]),
        )


Term = Union[ZetaTerm, ZetaProduct]


@dataclass(frozen=True)
class StuffleExpression:
    """Normalized signed multiset of terms: cancelled, canonically sorted."""

    terms: tuple

    @staticmethod
    def of(terms: Iterable[Term]) -> "StuffleExpression":
        counts: dict = {}
        reps: dict = {}
        for t in terms:
            k = t.key()
            counts[k] = counts.get(k, 0) + t.sign
            reps[k] = t
        out = []
        for k in sorted(counts):
            n = counts[k]
            if n == 0:
                continue
            rep = reps[k].with_sign(1 if n > 0 else -1)
            out.extend([rep] * abs(n))
        return StuffleExpression(tuple(out))

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "StuffleExpression") -> "StuffleExpression":
        return StuffleExpression.of(self.terms + other.terms)

    def negated(self) -> "StuffleExpression":
        return StuffleExpression.of(t.negated() for t in self.terms)

    def __sub__(self, other: "StuffleExpression") -> "StuffleExpression":
        return self + other.negated()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self):
        return {"terms": [t.to_json() for t in self.terms]}

    @staticmethod
    def from_json(obj) -> "StuffleExpression":
        terms = []
        for t in obj["terms"]:
            terms.append(
                ZetaProduct.from_json(t) if "product" in t else ZetaTerm.from_json(t)
            )
        return StuffleExpression.of(terms)


# ---------------------------------------------------------------------------
# the harmonic product
# ---------------------------------------------------------------------------

def _interleavings(left: tuple, right: tuple):
    """All interleavings of two argument chains with optional merges."""
    if not left:
        yield right
        return
    if not right:
        yield left
        return
    for rest in _interleavings(left[1:], right):
        yield (left[0],) + rest
    for rest in _interleavings(left, right[1:]):
        yield (right[0],) + rest
    for rest in _interleavings(left[1:], right[1:]):
        yield (left[0].merge(right[0]),) + rest


def chain_product(left_args, right_args) -> StuffleExpression:
    """Decomposition of zeta(left_args) * zeta(right_args)."""
    return StuffleExpression.of(
        ZetaTerm(args) for args in _interleavings(tuple(left_args), tuple(right_args))
    )


def stuffle_product(j: int, r: int) -> StuffleExpression:
    """Decomposition of zeta_j(s_1..s_j) * zeta_{r-j}(s_{j+1}..s_r)."""
    if not 1 <= j <= r - 1:
        raise ValueError("need 1 <= j <= r-1")
    var = lambda i: AffineForm.variable(i, r)
    return chain_product(
        tuple(var(i) for i in range(j)), tuple(var(i) for i in range(j, r))
    )


def isolate_target(product, target: ZetaTerm) -> StuffleExpression:
    """Rewrite ``target`` as the factor product minus the other terms.

    ``product`` is either a pair ``(j, r)`` selecting the canonical split of
    s_1..s_r, or a ``ZetaProduct``.
    """
    if isinstance(product, ZetaProduct):
        left, right = product.left, product.right
        expr = chain_product(left.args, right.args)
    else:
        j, r = product
        left = ZetaTerm(tuple(AffineForm.variable(i, r) for i in range(j)))
        right = ZetaTerm(tuple(AffineForm.variable(i, r) for i in range(j, r)))
        expr = stuffle_product(j, r)
    tkey = target.with_sign(1).key()
    hits = sum(1 for t in expr.terms if t.key() == tkey)
    if hits == 0:
        raise TargetAbsent("target term does not occur in the decomposition")
    if hits > 1:
        raise TargetAmbiguous("target term occurs more than once")
    rest = [t.negated() for t in expr.terms if t.key() != tkey]
    return StuffleExpression.of([ZetaProduct(left, right, 1)] + rest)


# ---------------------------------------------------------------------------
# case classification and expansion plans
# ---------------------------------------------------------------------------

ALL_ONES = "ALL_ONES"


def classify_case(m, r: Optional[int] = None) -> str:
    """Tag ``C_j`` for the largest j with m_j > 1, or ALL_ONES."""
    m = tuple(int(x) for x in m)
    if r is not None and len(m) != r:
        raise ValueError("point arity does not match depth")
    if any(x < 1 for x in m):
        raise NotPositive("all coordinates must be >= 1")
    big = [i for i, x in enumerate(m) if x > 1]
    if not big:
        return ALL_ONES
    return f"C_{big[-1] + 1}"


@dataclass(frozen=True)
class PlanStep:
    rule: str  # stuffle-isolate | taylor-expand | lse2-expand | depth-reduce
    operands: dict

    def to_json(self):
        out = {"rule": self.rule}
        for k, v in self.operands.items():
            out[k] = v.to_json() if hasattr(v, "to_json") else v
        return out


@dataclass(frozen=True)
class ExpansionPlan:
    point: tuple
    steps: tuple

    def to_json(self):
        return {
            "point": list(self.point),
            "steps": [s.to_json() for s in self.steps],
        }


def _plan_term(term: ZetaTerm, m, steps: list) -> None:
    center = term.center(m)
    case = classify_case(center)
    d = term.depth
    if case == ALL_ONES:
        steps.append(
            PlanStep("lse2-expand", {"term": term, "center": list(center)})
        )
        return
    j = int(case[2:])
    if j == d:
        steps.append(
            PlanStep("taylor-expand", {"term": term, "center": list(center)})
        )
        return
    left = ZetaTerm(term.args[:j])
    right = ZetaTerm(term.args[j:])
    expr = isolate_target(ZetaProduct(left, right), term.with_sign(1))
    steps.append(
        PlanStep(
            "stuffle-isolate",
            {"term": term, "center": list(center), "j": j, "expression": expr},
        )
    )
    for t in expr.terms:
        if isinstance(t, ZetaProduct):
            for factor in (t.left, t.right):
                steps.append(
                    PlanStep(
                        "depth-reduce",
                        {"term": factor, "center": list(factor.center(m))},
                    )
                )
        elif t.depth < d:
            steps.append(
                PlanStep("depth-reduce", {"term": t, "center": list(t.center(m))})
            )
        else:
            # same depth, pivot strictly further right: recurse in this plan
            _plan_term(t.with_sign(1), m, steps)


def expansion_plan(m, r: Optional[int] = None) -> ExpansionPlan:
    """Terminating rewrite plan for expanding zeta_r around the integer point m."""
    m = tuple(int(x) for x in m)
    classify_case(m, r)  # validates positivity and arity
    nv = len(m)
    root = ZetaTerm(tuple(AffineForm.variable(i, nv) for i in range(nv)))
    steps: list = []
    _plan_term(root, m, steps)
    return ExpansionPlan(m, tuple(steps))
