"""Extended Laurent expansions at positive integer centers, multi-index
Stieltjes coefficients, restricted (one-variable) expansions, and their
independent diagonal-product oracles."""

import mpmath as mp
import pytest

from ezlaurent import PrecisionContext
from ezlaurent import engine, mb, series, zeta1
from ezlaurent.errors import NotPositive, OrderCapExceeded
from ezlaurent.laurent import LaurentExpansion, LinearFactor
from tests.conftest import diff


CTX = PrecisionContext(digits=30)
CTX15 = PrecisionContext(digits=15)


# --- diagonal-product oracles ----------------------------------------------
#
# On the diagonal the nested sums collapse to symmetric combinations of
# one-variable zetas:
#   zeta_2(s, s)    = (zeta(s)^2 - zeta(2s)) / 2
#   zeta_3(s, s, s) = (zeta(s)^3 - 3 zeta(s) zeta(2s) + 2 zeta(3s)) / 6
# which give fully independent Laurent coefficients at s = 1.

def _laurent_mul(a, b, hi):
    out = {}
    for i, u in a.items():
        for j, v in b.items():
            k = i + j
            if k <= hi:
                out[k] = out.get(k, mp.mpc(0)) + u * v
    return out


def _zeta_laurent(scale: int, hi: int, ctx):
    """Laurent coefficients of zeta(scale*t + scale) ... for scale=1 at the
    pole, otherwise the Taylor row of zeta(scale + scale*t)."""
    if scale == 1:
        jet = zeta1.zeta_jet(mp.mpc(1), hi, ctx, minus_pole=True)
        out = {-1: mp.mpc(1)}
        out.update({n: jet[n] for n in range(hi + 1)})
        return out
    jet = zeta1.zeta_jet(mp.mpc(scale), hi, ctx)
    return {n: jet[n] * mp.mpf(scale) ** n for n in range(hi + 1)}


def diagonal_oracle(r: int, hi: int, ctx):
    """Laurent coefficients (degrees <= hi) of zeta_r(s,...,s) at s = 1."""
    z1 = _zeta_laurent(1, hi + 2 * r, ctx)
    if r == 2:
        z2 = _zeta_laurent(2, hi, ctx)
        sq = _laurent_mul(z1, z1, hi)
        return {k: (sq.get(k, mp.mpc(0)) - z2.get(k, mp.mpc(0))) / 2
                for k in range(-2, hi + 1)}
    if r == 3:
        z2 = _zeta_laurent(2, hi + r, ctx)
        z3 = _zeta_laurent(3, hi, ctx)
        cube = _laurent_mul(_laurent_mul(z1, z1, hi + 1), z1, hi)
        cross = _laurent_mul(z1, z2, hi)
        return {
            k: (cube.get(k, mp.mpc(0)) - 3 * cross.get(k, mp.mpc(0))
                + 2 * z3.get(k, mp.mpc(0))) / 6
            for k in range(-3, hi + 1)
        }
    raise ValueError(r)


class TestExpandPositive:
    def test_interior_center_is_plain_taylor(self):
        E = engine.expand_positive((4, 5), 2, CTX)
        with CTX.working():
            coeffs, _ = series.ez_taylor((mp.mpc(4), mp.mpc(5)), 2, CTX)
            for n, c in coeffs.items():
                got = E.coefficient((), n)
                assert diff(got, c) < mp.mpf("1e-25"), n

    def test_depth2_simple_pole_center(self):
        # at (2, 1): one simple pole in (s2 - 1) with numerator zeta(s1)-jet
        E = engine.expand_positive((2, 1), 2, CTX)
        with CTX.working():
            num00 = E.coefficient((LinearFactor(2, 1),), (0, 0))
            num10 = E.coefficient((LinearFactor(2, 1),), (1, 0))
            assert diff(num00, mp.zeta(2)) < mp.mpf("1e-25")
            assert diff(num10, mp.zeta(mp.mpf(2), derivative=1)) < mp.mpf("1e-25")

    def test_depth2_reconstruction(self):
        E = engine.expand_positive((2, 1), 3, CTX)
        with CTX.working():
            # truncation of the order-3 numerator is amplified by the simple
            # pole: expect ~ |e|^4 / |e2|
            s = (mp.mpf(2) + mp.mpf("1e-4"), mp.mpf(1) + mp.mpf("-2e-4"))
            ref = mb.ez_eval_mb(s, ctx=CTX)
            assert diff(E.evaluate(s), ref) < mp.mpf("1e-11")

    def test_rejects_nonpositive_and_deep_order(self):
        with pytest.raises(NotPositive):
            engine.expand_positive((0, 1), 1, CTX15)
        with pytest.raises(OrderCapExceeded):
            engine.expand_positive((2, 1), 99, CTX15)

    def test_json_round_trip(self):
        # serialization keeps the requested digits; compare coefficients,
        # which avoids pole amplification of the last serialized digit
        E = engine.expand_positive((2, 1), 2, CTX15)
        again = LaurentExpansion.from_json(E.to_json())
        assert len(again.terms) == len(E.terms)
        for t, u in zip(E.terms, again.terms):
            assert t.denominator == u.denominator
            assert set(t.numerator) == set(u.numerator)
            for n, c in t.numerator.items():
                assert diff(c, u.numerator[n]) < mp.mpf("1e-13"), n


class TestMultipleStieltjes:
    def test_depth1_reduces_to_classical(self):
        for n in range(3):
            assert diff(
                engine.multiple_stieltjes((n,), CTX), zeta1.stieltjes(n, CTX)
            ) < CTX.tol

    def test_depth2_first_row(self):
        # gamma_{(0,0)} = gamma_0 and gamma_{(1,0)} = gamma_1
        g00 = engine.multiple_stieltjes((0, 0), CTX)
        g10 = engine.multiple_stieltjes((1, 0), CTX)
        assert diff(g00, zeta1.stieltjes(0, CTX)) < mp.mpf("1e-20")
        assert diff(g10, zeta1.stieltjes(1, CTX)) < mp.mpf("1e-20")


class TestRestricted:
    def test_depth1(self):
        R = engine.restricted_expand((1,), 2, CTX)
        assert R.min_degree == -1
        assert diff(R.coefficient(-1), 1) < CTX.tol
        assert diff(R.coefficient(0), zeta1.stieltjes(0, CTX)) < CTX.tol

    # coefficients of degree k are complete for k <= order - (r - 1); the
    # sum-of-coefficients accessor relies on exactly that range

    def test_depth2_against_diagonal_oracle(self):
        R = engine.restricted_expand((1, 1), 3, CTX)
        with CTX.working():
            want = diagonal_oracle(2, 3, CTX)
        assert R.min_degree == -2
        for k in range(-2, 3):
            assert diff(R.coefficient(k), want[k]) < mp.mpf("1e-20"), k

    def test_depth3_against_diagonal_oracle(self):
        R = engine.restricted_expand((1, 1, 1), 1, CTX15)
        with CTX15.working():
            want = diagonal_oracle(3, 1, CTX15)
        assert R.min_degree == -3
        for k in range(-3, 0):
            assert diff(R.coefficient(k), want[k]) < CTX15.tol * 10, k

    def test_leading_coefficients_all_ones(self):
        # 1/r! on the deepest pole and gamma/(r-1)! next
        R2 = engine.restricted_expand((1, 1), 2, CTX)
        with CTX.working():
            assert diff(R2.coefficient(-2), mp.mpf(1) / 2) < CTX.tol
            assert diff(R2.coefficient(-1), mp.euler) < CTX.tol

    def test_mixed_center(self):
        # only the coordinates centered at 1 are identified with s
        R = engine.restricted_expand((2, 1), 2, CTX)
        assert R.identified == (2,)
        with CTX.working():
            t = mp.mpf("1e-5")
            ref = mb.ez_eval_mb((mp.mpf(2), 1 + t), ctx=CTX)
            assert diff(R.evaluate(1 + t), ref) < mp.mpf("1e-13")


class TestStieltjesSum:
    def test_depth2_low_orders(self):
        # S(0, 2) = gamma, checked internally against the diagonal path
        s0 = engine.stieltjes_sum(0, 2, CTX)
        assert diff(s0, mp.euler) < mp.mpf("1e-20")

    def test_depth2_order1_closed_form(self):
        s1 = engine.stieltjes_sum(1, 2, CTX)
        with CTX.working():
            g0 = zeta1.stieltjes(0, CTX)
            g1 = zeta1.stieltjes(1, CTX)
            want = (g0 ** 2 + 2 * g1 - mp.zeta(2)) / 2
        assert diff(s1, want) < mp.mpf("1e-20")


class TestPoleChecks:
    @pytest.mark.parametrize("m", [(1, 1), (2, 1), (1, 1, 1)])
    def test_lemma1_pole_check(self, m):
        ctx = CTX15 if len(m) == 3 else CTX
        assert engine.lemma1_pole_check(m, ctx)
