"""Command-line interface: exit codes, output formats, determinism, and
round-tripping expansion payloads back through the library."""

import json

import mpmath as mp
import pytest

from ezlaurent import PrecisionContext
from ezlaurent import mb
from ezlaurent.cli import main
from ezlaurent.laurent import LaurentExpansion, parse_complex
from tests.conftest import diff


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


class TestExitCodes:
    def test_ok(self, capsys):
        code, out, _ = run(capsys, "eval", "--point", "3,4", "--digits", "15")
        assert code == 0
        payload = json.loads(out)
        v = parse_complex(payload["value"])
        ref = mb.ez_eval_mb((3, 4), ctx=PrecisionContext(digits=15))
        assert diff(v, ref) < mp.mpf("1e-10")

    def test_singular_point_is_domain_error(self, capsys):
        code, _, err = run(capsys, "eval", "--point", "2,1", "--digits", "15")
        assert code == 2
        assert "singular" in err

    def test_series_out_of_domain(self, capsys):
        code, _, err = run(
            capsys, "eval", "--point", "2,0.5", "--method", "series",
            "--digits", "15",
        )
        assert code == 2

    def test_series_infeasible_is_precision_error(self, capsys):
        code, _, err = run(
            capsys, "eval", "--point", "1.0001,1.0001,2.0",
            "--method", "series", "--digits", "15",
        )
        assert code == 3
        assert "precision" in err

    def test_bad_flag_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "eval", "--point", "3,4", "--method", "bogus")
        assert code == 64

    def test_low_digits_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "eval", "--point", "3,4", "--digits", "5")
        assert code == 64


class TestEval:
    def test_deterministic_output(self, capsys):
        a = run(capsys, "eval", "--point", "3,4", "--digits", "15")
        b = run(capsys, "eval", "--point", "3,4", "--digits", "15")
        assert a == b

    def test_auto_prefers_series_in_domain(self, capsys):
        code, out, _ = run(capsys, "eval", "--point", "4,5", "--digits", "15")
        assert code == 0
        assert json.loads(out)["method"] == "series"

    def test_auto_falls_back_to_contour(self, capsys):
        code, out, _ = run(capsys, "eval", "--point", "4,0.5", "--digits", "15")
        assert code == 0
        assert json.loads(out)["method"] == "mb"

    def test_boundary_point_series(self, capsys):
        # depth-2 boundary point reachable only through acceleration
        code, out, _ = run(
            capsys, "eval", "--point", "1,2", "--method", "series",
            "--digits", "20",
        )
        assert code == 0
        v = parse_complex(json.loads(out)["value"])
        with mp.workdps(40):
            assert diff(v, mp.zeta(3)) < mp.mpf("1e-15")

    def test_csv_format(self, capsys):
        code, out, _ = run(
            capsys, "eval", "--point", "3,4", "--digits", "15",
            "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].split(",")[:1] == ["multi_index"]


class TestExpand:
    def test_round_trip_evaluates(self, capsys):
        code, out, _ = run(
            capsys, "expand", "--point", "2,1", "--order", "2",
            "--digits", "15",
        )
        assert code == 0
        payload = json.loads(out)
        E = LaurentExpansion.from_json(payload)
        ctx = PrecisionContext(digits=15)
        with ctx.working():
            s = (mp.mpf(2) + mp.mpf("1e-4"), mp.mpf(1) - mp.mpf("2e-4"))
            ref = mb.ez_eval_mb(s, ctx=ctx)
            assert diff(E.evaluate(s), ref) < mp.mpf("1e-7")

    def test_depth1_pole(self, capsys):
        code, out, _ = run(
            capsys, "expand", "--point", "1", "--order", "3", "--digits", "15",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["center"] == [1]


class TestStieltjesVerb:
    def test_depth1(self, capsys):
        code, out, _ = run(capsys, "stieltjes", "--index", "1", "--digits", "20")
        assert code == 0
        v = parse_complex(json.loads(out)["value"])
        with mp.workdps(40):
            want = -mp.stieltjes(1)  # series normalization flips the sign
            assert diff(v, want) < mp.mpf("1e-15")  # ctx.tol at 20 digits

    def test_depth2(self, capsys):
        code, out, _ = run(capsys, "stieltjes", "--index", "0,0", "--digits", "15")
        assert code == 0
        v = parse_complex(json.loads(out)["value"])
        with mp.workdps(40):
            assert diff(v, mp.euler) < mp.mpf("1e-12")


class TestRestrictedVerb:
    def test_all_ones_leading(self, capsys):
        code, out, _ = run(
            capsys, "restricted", "--point", "1,1", "--order", "2",
            "--digits", "15",
        )
        assert code == 0
        payload = json.loads(out)
        coeffs = {int(k): parse_complex(v) for k, v in payload["coefficients"].items()}
        assert diff(coeffs[-2], mp.mpf("0.5")) < mp.mpf("1e-12")
        with mp.workdps(40):
            assert diff(coeffs[-1], mp.euler) < mp.mpf("1e-12")


class TestLimitsVerb:
    def test_near_point(self, capsys):
        code, out, _ = run(
            capsys, "limits", "--point", "2,0", "--eps", "1e-4,2e-4",
            "--digits", "15",
        )
        assert code == 0
        payload = json.loads(out)
        assert "total" in payload and not payload.get("indeterminate")

    def test_indeterminate(self, capsys):
        code, out, _ = run(
            capsys, "limits", "--point", "1,0,1", "--eps", "1e-4,1e-4,1e-4",
            "--digits", "15",
        )
        assert code == 0
        assert json.loads(out)["indeterminate"] is True


class TestVerify:
    def test_stuffle_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "stuffle", "--digits", "20",
                           "--format", "text")
        assert code == 0
        assert "FAIL" not in out and "PASS" in out
