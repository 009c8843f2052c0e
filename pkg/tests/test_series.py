"""Direct nested-series evaluation: domain tests, values, derivatives,
and the certified depth-2 boundary acceleration."""

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ezlaurent import PrecisionContext
from ezlaurent import mb, series
from ezlaurent.errors import OutOfDomain, PrecisionUnreachable
from tests.conftest import diff


CTX = PrecisionContext(digits=30)
CTX15 = PrecisionContext(digits=15)


class TestDomain:
    def test_depth1(self):
        assert series.in_domain((1.5,))
        assert not series.in_domain((1.0,))  # the domain is open
        assert not series.in_domain((0.5,))

    def test_depth2_suffix_conditions(self):
        # needs Re s2 > 1 and Re(s1+s2) > 2
        assert series.in_domain((0.5, 1.6))
        assert not series.in_domain((0.3, 1.6))
        assert not series.in_domain((5.0, 1.0))

    def test_complex_uses_real_parts(self):
        assert series.in_domain((mp.mpc(0.5, 40), mp.mpc(1.6, -3)))

    def test_out_of_domain_raises(self):
        with pytest.raises(OutOfDomain):
            series.ez_value((2.0, 0.5), CTX15)


class TestValues:
    def test_depth1_matches_zeta(self):
        with mp.workdps(45):
            ref = mp.zeta(mp.mpf(3))
        assert diff(series.ez_value((3,), CTX), ref) < CTX.tol

    def test_depth2_sum_identity(self):
        # zeta(a)zeta(b) = zeta2(a,b) + zeta2(b,a) + zeta(a+b)
        a, b = mp.mpf(3), mp.mpf("4.5")
        with CTX.working():
            lhs = mp.zeta(a) * mp.zeta(b)
            rhs = (
                series.ez_value((a, b), CTX)
                + series.ez_value((b, a), CTX)
                + mp.zeta(a + b)
            )
        assert diff(lhs, rhs) < CTX.tol

    def test_zeta2_1_2_is_zeta3(self):
        # classical: zeta2(1, 2) = zeta(3)
        val, bound = series.ez_value_full((1, 2), CTX)
        with mp.workdps(45):
            assert diff(val, mp.zeta(3)) < CTX.tol
        assert bound < CTX.tol

    @settings(max_examples=8, deadline=None)
    @given(
        st.floats(min_value=2.5, max_value=8),
        st.floats(min_value=2.5, max_value=8),
    )
    def test_depth2_matches_contour(self, a, b):
        s = (mp.mpf(a), mp.mpf(b))
        v1 = series.ez_value(s, CTX15)
        v2 = mb.ez_eval_mb(s, ctx=CTX15)
        assert diff(v1, v2) < CTX15.tol


class TestBoundaryAcceleration:
    # points in the depth-2 domain where the raw nested series is hopeless
    POINTS = [
        (mp.mpf("1.0"), mp.mpf("2.0")),
        (mp.mpf("1.1"), mp.mpf("1.3")),
        (mp.mpf("0.5"), mp.mpf("2.1")),
        (mp.mpf("-1.0"), mp.mpf("4.2")),
        (mp.mpc("0.8", "2.0"), mp.mpc("1.7", "-1.0")),
    ]

    def test_certified_bound_is_honest(self):
        for s in self.POINTS:
            val, bound = series.ez_value_full(s, CTX)
            if mp.im(s[0]) == 0 and s[0] == 1 and s[1] == 2:
                with mp.workdps(45):
                    ref = mp.zeta(3)
            else:
                ref = mb.ez_eval_mb(s, ctx=CTX)
            err = diff(val, ref)
            # the reported bound must cover the actual error (the contour
            # reference itself is good to ~ctx.tol)
            assert err < bound + CTX.tol, (s, err, bound)
            assert bound < CTX.tol

    def test_depth3_boundary_still_raises(self):
        # just inside the depth-3 domain but far from summable: the direct
        # evaluator refuses rather than returning an unconverged number
        with pytest.raises(PrecisionUnreachable):
            series.ez_value((1.0001, 1.0001, 2.0), CTX15)


class TestDerivatives:
    def test_jet_matches_numeric_derivative(self):
        q = (mp.mpf(4), mp.mpf(5))
        with CTX.working():
            j00 = series.ez_deriv((0, 0), q, CTX)
            j10 = series.ez_deriv((1, 0), q, CTX)
            j01 = series.ez_deriv((0, 1), q, CTX)
            h = mp.mpf("1e-9")
            d1 = (series.ez_value((q[0] + h, q[1]), CTX)
                  - series.ez_value((q[0] - h, q[1]), CTX)) / (2 * h)
            d2 = (series.ez_value((q[0], q[1] + h), CTX)
                  - series.ez_value((q[0], q[1] - h), CTX)) / (2 * h)
        assert diff(j10, d1) < mp.mpf("1e-15")
        assert diff(j01, d2) < mp.mpf("1e-15")
        assert diff(j00, series.ez_value(q, CTX)) < CTX.tol

    def test_taylor_reconstructs_nearby_value(self):
        q = (mp.mpf(4), mp.mpf(5))
        with CTX.working():
            coeffs, bound = series.ez_taylor(q, 3, CTX)
            e = (mp.mpf("1e-3"), mp.mpf("-2e-3"))
            rec = sum(c * e[0] ** n[0] * e[1] ** n[1] for n, c in coeffs.items())
            ref = series.ez_value((q[0] + e[0], q[1] + e[1]), CTX)
        assert diff(rec, ref) < mp.mpf("1e-11")
