"""Product-splitting identities: symbolic structure, term counts against an
independent brute-force enumeration, and numeric residuals."""

import random
from math import comb

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ezlaurent import PrecisionContext
from ezlaurent import stuffle
from ezlaurent.errors import NotPositive, TargetAbsent, TargetAmbiguous
from ezlaurent.series import ez_value
from ezlaurent.stuffle import (
    AffineForm,
    StuffleExpression,
    ZetaProduct,
    ZetaTerm,
    chain_product,
    classify_case,
    expansion_plan,
    isolate_target,
    stuffle_product,
)
from tests.conftest import diff


CTX = PrecisionContext(digits=30)


# --- an independent oracle: enumerate interleavings as lattice paths -------

def brute_interleavings(a: int, b: int):
    """All merge patterns of chains (0..a-1) and (a..a+b-1) as tuples of
    frozensets, enumerated by walking the (a+1) x (b+1) lattice with
    diagonal steps. Never consults the implementation under test."""
    out = []

    def walk(i, j, acc):
        if i == a and j == b:
            out.append(tuple(acc))
            return
        if i < a:
            walk(i + 1, j, acc + [frozenset([i])])
        if j < b:
            walk(i, j + 1, acc + [frozenset([a + j])])
        if i < a and j < b:
            walk(i + 1, j + 1, acc + [frozenset([i, a + j])])

    walk(0, 0, [])
    return out


def delannoy(a: int, b: int) -> int:
    return sum(comb(a, k) * comb(b, k) * 2 ** k for k in range(min(a, b) + 1))


class TestTermCounts:
    def test_counts_match_brute_enumeration(self):
        for r in range(2, 7):
            for j in range(1, r):
                expr = stuffle_product(j, r)
                paths = brute_interleavings(j, r - j)
                assert len(expr.terms) == len(paths) == delannoy(j, r - j)

    def test_terms_are_exactly_the_lattice_paths(self):
        # same multiset of merge patterns, not just the same count
        for (j, r) in [(1, 2), (2, 4), (2, 5)]:
            expr = stuffle_product(j, r)

            def canon(pattern):
                return tuple(tuple(sorted(block)) for block in pattern)

            got = sorted(
                canon(tuple(frozenset(a.support) for a in t.args))
                for t in expr.terms
            )
            want = sorted(canon(p) for p in brute_interleavings(j, r - j))
            assert got == want

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))
    def test_counts_property(self, a, b):
        assert len(chain_product(
            tuple(AffineForm.variable(i, a + b) for i in range(a)),
            tuple(AffineForm.variable(a + i, a + b) for i in range(b)),
        ).terms) == delannoy(a, b)


class TestNumericIdentities:
    def _residual(self, j, r, s):
        expr = stuffle_product(j, r)
        with CTX.working():
            lhs = ez_value(s[:j], CTX) * ez_value(s[j:], CTX)
            rhs = mp.mpc(0)
            for t in expr.terms:
                rhs += t.sign * ez_value(tuple(a.evaluate(s) for a in t.args), CTX)
            return abs(lhs - rhs)

    @pytest.mark.parametrize("j,r", [(1, 2), (1, 3), (2, 3), (2, 4)])
    def test_identity_residuals(self, j, r):
        rng = random.Random(1000 * r + j)
        for _ in range(3):
            s = tuple(mp.mpf(8) + 4 * mp.mpf(rng.random()) for _ in range(r))
            assert self._residual(j, r, s) < mp.mpf("1e-20")


class TestAffineForm:
    def test_merge_and_evaluate_exact(self):
        a = AffineForm.variable(0, 3)
        b = AffineForm.variable(2, 3, shift=1)
        m = a.merge(b)
        assert m.coeffs == (1, 0, 1) and m.shift == 1
        with mp.workdps(40):
            # dyadic inputs so the expected sum is exact at any precision
            v = m.evaluate((mp.mpf("0.125"), mp.mpf(7), mp.mpf("0.25")))
            assert diff(v, mp.mpf("1.375")) == 0

    def test_must_involve_a_variable(self):
        with pytest.raises(ValueError):
            AffineForm((0, 0), 3)


class TestIsolation:
    def test_target_rewrite_cancels(self):
        r = 3
        target = ZetaTerm(tuple(AffineForm.variable(i, r) for i in range(r)))
        expr = isolate_target((1, r), target)
        # expr says: target = product - (other decomposition terms), so
        # expr - target + decomposition must collapse to the product alone
        recon = StuffleExpression.of(
            list(expr.terms)
            + [target.negated()]
            + list(stuffle_product(1, r).terms)
        )
        assert len(recon.terms) == 1
        assert all(isinstance(t, ZetaProduct) for t in recon.terms)

    def test_absent_target(self):
        bad = ZetaTerm((AffineForm((1, 1, 1), 5),))
        with pytest.raises(TargetAbsent):
            isolate_target((1, 3), bad)

    def test_ambiguous_target(self):
        # squaring one variable makes the two single-swap interleavings equal
        v = AffineForm.variable(0, 2)
        term = ZetaTerm((v,))
        with pytest.raises(TargetAmbiguous):
            isolate_target(ZetaProduct(term, term), ZetaTerm((v, v)))


class TestPlans:
    def test_classify(self):
        assert classify_case((1, 1, 1)) == "ALL_ONES"
        assert classify_case((2, 1, 1)) == "C_1"
        assert classify_case((1, 3, 1, 1)) == "C_2"
        assert classify_case((1, 1, 2)) == "C_3"
        with pytest.raises(NotPositive):
            classify_case((0, 1))

    def test_plan_terminates_and_pivots_move_right(self):
        for m in [(2, 1, 1), (1, 2, 1, 1), (3, 2), (1, 1, 1)]:
            plan = expansion_plan(m)
            assert plan.steps, m
            rules = [st.rule for st in plan.steps]
            assert all(
                r in {"stuffle-isolate", "taylor-expand", "lse2-expand",
                      "depth-reduce"}
                for r in rules
            )

    def test_json_round_trip(self):
        expr = stuffle_product(2, 4)
        again = StuffleExpression.from_json(expr.to_json())
        assert [t.key() for t in again.terms] == [t.key() for t in expr.terms]
