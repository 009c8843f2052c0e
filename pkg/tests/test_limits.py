"""Near-point limit formulas at nonpositive centers, the explicit
finite-part family at (0,0), and genuine points of indeterminacy."""

import mpmath as mp
import pytest

from ezlaurent import PrecisionContext
from ezlaurent import limits, mb
from ezlaurent.errors import InvalidApproach, UnsupportedCenter
from ezlaurent.limits import INDETERMINATE, ApproachSpec, Indeterminate
from tests.conftest import diff


CTX = PrecisionContext(digits=30)
CTX15 = PrecisionContext(digits=15)


class TestDepth2Near:
    @pytest.mark.parametrize("m", [(2, 0), (3, 0), (2, -2)])
    def test_residual_shrinks_linearly(self, m):
        # the formula is exact up to O(|e2|): halving e must halve the error
        errs = []
        for t in (mp.mpf("1e-3"), mp.mpf("5e-4")):
            eps = ApproachSpec.of(t, -2 * t)
            near = limits.zeta2_near(m, eps, CTX15)
            with CTX15.working():
                ref = mb.ez_eval_mb((m[0] + t, m[1] - 2 * t), ctx=CTX15)
                errs.append(diff(near.value(), ref))
        assert errs[1] < errs[0]
        assert errs[0] < mp.mpf("1e-1")

    def test_rejects_positive_m2(self):
        with pytest.raises(UnsupportedCenter):
            limits.zeta2_near((2, 1), ApproachSpec.of(mp.mpf("1e-3"), mp.mpf("1e-3")))

    def test_rejects_zero_e2(self):
        with pytest.raises(InvalidApproach):
            limits.zeta2_near((2, 0), ApproachSpec.of(mp.mpf("1e-3"), mp.mpf(0)))


class TestDepth2Corollary:
    def test_balanced_direction_families(self):
        # along e2 = lam * (e1 + e2) the limit at (0, 0) is 1/3 + lam/12
        for lam in (mp.mpf(1) / 2, mp.mpf(1) / 3, mp.mpf(1)):
            t = mp.mpf("1e-8")
            e2 = lam * t
            e1 = t - e2
            near = limits.zeta2_corollary((0, 0), ApproachSpec.of(e1, e2), CTX)
            with CTX.working():
                want = mp.mpf(1) / 3 + lam / mp.mpf(12)
                got = near.value()
            assert diff(got, want) < mp.mpf("1e-6"), lam

    def test_matches_direct_evaluation(self):
        t = mp.mpf("1e-5")
        eps = ApproachSpec.of(t, 3 * t)
        near = limits.zeta2_corollary((0, 0), eps, CTX15)
        with CTX15.working():
            ref = mb.ez_eval_mb((t, 3 * t), ctx=CTX15)
        assert diff(near.value(), ref) < mp.mpf("1e-3")

    def test_unbalanced_ratio(self):
        # |e1 / (e1+e2)| = 1e3: the pole factor is huge yet the formula
        # still tracks the true value to O(|e2|)
        e1 = mp.mpf("1e-4")
        total = mp.mpf("1e-7")
        e2 = total - e1
        near = limits.zeta2_corollary((0, 0), ApproachSpec.of(e1, e2), CTX15)
        with CTX15.working():
            ref = mb.ez_eval_mb((e1, e2), ctx=CTX15)
        assert diff(near.value(), ref) < mp.mpf("1e-2")

    def test_rejects_positive_center(self):
        with pytest.raises(UnsupportedCenter):
            limits.zeta2_corollary((1, 0), ApproachSpec.of(mp.mpf("1e-3"), mp.mpf("1e-3")))


class TestDepth3:
    def test_trailing_nonpositive_center(self):
        m = (2, 2, 0)
        errs = []
        for t in (mp.mpf("1e-3"), mp.mpf("5e-4")):
            eps = ApproachSpec.of(t, t, -3 * t)
            near = limits.zeta3_near(m, eps, CTX15)
            s = tuple(x + e for x, e in zip(m, (t, t, -3 * t)))
            with CTX15.working():
                ref = mb.ez_eval_mb(s, ctx=CTX15)
            errs.append(diff(near.value(), ref))
        assert errs[1] < errs[0]

    def test_middle_nonpositive_center(self):
        m = (2, 0, 3)
        t = mp.mpf("1e-4")
        eps = ApproachSpec.of(t, -2 * t, t)
        near = limits.zeta3_near(m, eps, CTX15)
        s = tuple(x + e for x, e in zip(m, (t, -2 * t, t)))
        with CTX15.working():
            ref = mb.ez_eval_mb(s, ctx=CTX15)
        assert diff(near.value(), ref) < mp.mpf("1e-2")

    @pytest.mark.parametrize("m", [(1, 0, 1), (2, 0, 1), (2, -1, 1), (3, -2, 1)])
    def test_indeterminate_centers(self, m):
        out = limits.zeta3_near(m, ApproachSpec.of(*(mp.mpf("1e-4"),) * 3), CTX15)
        assert isinstance(out, Indeterminate)
        assert out is INDETERMINATE

    def test_unsupported_center(self):
        with pytest.raises(UnsupportedCenter):
            limits.zeta3_near((1, 2, 3), ApproachSpec.of(*(mp.mpf("1e-4"),) * 3), CTX15)


class TestValueAssembly:
    def test_value_is_sum_of_parts(self):
        near = limits.zeta2_near(
            (2, 0), ApproachSpec.of(mp.mpf("1e-3"), mp.mpf("2e-3")), CTX15
        )
        with CTX15.working():
            want = mp.mpc(near.finite_part)
            for p in near.principal_terms:
                want += p.value
            got = near.value()
        assert diff(got, want) == 0
        assert near.error_order == "O(|e2|)"
