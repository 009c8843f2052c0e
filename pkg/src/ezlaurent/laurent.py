"""Extended Laurent expansions: Taylor numerators over affine linear factors.

An expansion at an integer center m is a finite sum of fraction terms, each a
truncated multivariate Taylor polynomial in the offsets eps_i = s_i - m_i
divided by a product of linear factors s(j,r) - c = s_j + ... + s_r - c.
Numerator and denominator variables need not match, which is exactly what
makes centers on singular hyperplanes expressible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

import mpmath as mp


def _num_str(x, digits: int) -> str:
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def format_complex(v, digits: int):
    v = mp.mpc(v)
    return [_num_str(mp.re(v), digits), _num_str(mp.im(v), digits)]


def parse_complex(pair):
    return mp.mpc(mp.mpf(pair[0]), mp.mpf(pair[1]))


@dataclass(frozen=True, order=True)
class LinearFactor:
    """The affine form s(j,r) - c = s_j + s_{j+1} + ... + s_r - c."""

    j: int
    c: int

    def __post_init__(self):
        if self.j < 1:
            raise ValueError("factor start index must be >= 1")

    def evaluate(self, s):
        if self.j > len(s):
            raise ValueError("factor start index exceeds arity")
        acc = mp.mpf(-self.c)
        for x in s[self.j - 1:]:
            acc = acc + x
        return acc

    def describe(self, r: int) -> str:
        vars_ = "+".join(f"s{k}" for k in range(self.j, r + 1))
        return f"{vars_}-{self.c}" if self.c else vars_

    def to_json(self):
        return {"j": self.j, "c": self.c}

    @staticmethod
    def from_json(obj) -> "LinearFactor":
        return LinearFactor(int(obj["j"]), int(obj["c"]))


def poly_mul(a: Dict[tuple, object], b: Dict[tuple, object], order: int):
    out: Dict[tuple, object] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if sum(k) > order:
                continue
            out[k] = out.get(k, mp.mpc(0)) + va * vb
    return out


def poly_eval(p: Dict[tuple, object], eps):
    acc = mp.mpc(0)
    for k, v in p.items():
        t = v
        for e, n in zip(eps, k):
            for _ in range(n):
                t = t * e
        acc += t
    return acc


@dataclass(frozen=True)
class FractionTerm:
    denominator: Tuple[LinearFactor, ...]
    numerator: Dict[tuple, object]

    def __post_init__(self):
        object.__setattr__(self, "denominator", tuple(sorted(self.denominator)))

    def key(self):
        return self.denominator

    def evaluate(self, s, eps):
        den = mp.mpc(1)
        for f in self.denominator:
            den = den * f.evaluate(s)
        if den == 0:
            raise ZeroDivisionError(
                "evaluation point lies on a denominator zero set"
            )
        return poly_eval(self.numerator, eps) / den


@dataclass(frozen=True)
class LaurentExpansion:
    center: tuple
    order: int
    digits: int
    terms: Tuple[FractionTerm, ...]

    @property
    def r(self) -> int:
        return len(self.center)

    @staticmethod
    def of(center, order, digits, terms: Iterable[FractionTerm]) -> "LaurentExpansion":
        center = tuple(int(x) for x in center)
        merged: Dict[tuple, Dict[tuple, object]] = {}
        for t in terms:
            num = merged.setdefault(t.key(), {})
            for k, v in t.numerator.items():
                num[k] = num.get(k, mp.mpc(0)) + v
        out = []
        for den in sorted(merged, key=lambda d: (len(d), d)):
            num = {k: v for k, v in merged[den].items() if v != 0}
            if num:
                out.append(FractionTerm(den, num))
        return LaurentExpansion(center, int(order), int(digits), tuple(out))

    @staticmethod
    def taylor(center, order, digits, numerator) -> "LaurentExpansion":
        return LaurentExpansion.of(
            center, order, digits, [FractionTerm((), dict(numerator))]
        )

    def evaluate(self, s):
        s = tuple(mp.mpc(x) for x in s)
        if len(s) != self.r:
            raise ValueError("point arity does not match expansion arity")
        eps = tuple(x - c for x, c in zip(s, self.center))
        return sum((t.evaluate(s, eps) for t in self.terms), mp.mpc(0))

    def __add__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        if other.center != self.center:
            raise ValueError("cannot add expansions at different centers")
        return LaurentExpansion.of(
            self.center,
            min(self.order, other.order),
            max(self.digits, other.digits),
            self.terms + other.terms,
        )

    def scale(self, c) -> "LaurentExpansion":
        c = mp.mpc(c)
        return LaurentExpansion.of(
            self.center,
            self.order,
            self.digits,
            [
                FractionTerm(t.denominator, {k: c * v for k, v in t.numerator.items()})
                for t in self.terms
            ],
        )

    def __sub__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        return self + other.scale(-1)

    def __mul__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        if other.center != self.center:
            raise ValueError("cannot multiply expansions at different centers")
        order = min(self.order, other.order)
        terms = []
        for a in self.terms:
            for b in other.terms:
                terms.append(
                    FractionTerm(
                        a.denominator + b.denominator,
                        poly_mul(a.numerator, b.numerator, order),
                    )
                )
        return LaurentExpansion.of(
            self.center, order, max(self.digits, other.digits), terms
        )

    def coefficient(self, denominator, index):
        """Numerator coefficient of a given denominator's multi-index."""
        den = tuple(sorted(denominator))
        for t in self.terms:
            if t.denominator == den:
                return t.numerator.get(tuple(index), mp.mpc(0))
        return mp.mpc(0)

    def to_json(self):
        terms = []
        for t in self.terms:
            num = {}
            for k in sorted(t.numerator):
                num[",".join(str(n) for n in k)] = format_complex(
                    t.numerator[k], self.digits
                )
            terms.append(
                {
                    "denominator": [f.to_json() for f in t.denominator],
                    "numerator": num,
                }
            )
        return {
            "center": list(self.center),
            "order": self.order,
            "digits": self.digits,
            "terms": terms,
        }

    @staticmethod
    def from_json(obj) -> "LaurentExpansion":
        terms = []
        for t in obj["terms"]:
            den = tuple(LinearFactor.from_json(f) for f in t["denominator"])
            num = {
                tuple(int(n) for n in k.split(",")): parse_complex(v)
                for k, v in t["numerator"].items()
            }
            terms.append(FractionTerm(den, num))
        return LaurentExpansion.of(
            tuple(obj["center"]), int(obj["order"]), int(obj["digits"]), terms
        )
