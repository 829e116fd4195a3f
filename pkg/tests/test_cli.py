"""CLI contract: commands, formats, exit codes, round-trips."""

import csv
import io
import json
import math

import numpy as np
import pytest

from pseudoherm import ambient, cli, verify
from pseudoherm.ambient import Point4
from pseudoherm.ellipsoid import EllipsoidParams


def run_cli(args):
    return cli.main(args)


def read_csv(path):
    with open(path) as fh:
        first = fh.readline()
        assert first.startswith("# pseudoherm-format: 1")
        reader = csv.DictReader(fh)
        return list(reader)


class TestInvariantsCommand:
    def test_sphere_all_zero(self, tmp_path):
        out = tmp_path / "inv.csv"
        assert run_cli(["invariants", "--a", "0", "--b", "0",
                        "--grid", "8", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows
        for r in rows:
            assert abs(float(r["re_Q11"])) <= 1e-14
            assert abs(float(r["im_Q11"])) <= 1e-14
            assert float(r["R"]) == pytest.approx(2.0, abs=1e-12)

    def test_grid_contains_w_pole(self, tmp_path):
        out = tmp_path / "inv.csv"
        assert run_cli(["invariants", "--a", "0.5", "--b", "0",
                        "--grid", "8", "--out", str(out)]) == 0
        rows = read_csv(out)
        hits = [r for r in rows
                if abs(float(r["x"])) < 1e-12 and abs(float(r["y"])) < 1e-12
                and abs(float(r["u"]) - 1.0) < 1e-12 and abs(float(r["v"])) < 1e-12]
        assert hits and float(hits[0]["R"]) == pytest.approx(1.75, abs=1e-12)

    def test_bad_parameters_exit_2(self, capsys):
        assert run_cli(["invariants", "--a", "1.5", "--b", "0"]) == 2
        assert "0 <= b <= a < 1" in capsys.readouterr().err

    def test_json_format(self, tmp_path):
        out = tmp_path / "inv.json"
        assert run_cli(["invariants", "--a", "0.3", "--b", "0.1",
                        "--grid", "8", "--format", "json", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["format_version"] == 1
        assert doc["columns"][0] == "x"
        assert len(doc["rows"]) > 0


class TestLocusCommand:
    def test_equal_axes_four_families(self, tmp_path):
        out = tmp_path / "locus.csv"
        assert run_cli(["locus", "--a", "0.3", "--b", "0.3",
                        "--samples", "24", "--out", str(out)]) == 0
        rows = read_csv(out)
        keys = {(r["kind"], r["tau"]) for r in rows}
        assert len(keys) == 4
        assert {k for k, _ in keys} == {"gamma+", "gamma-", "special_ba"}

    def test_revolution_three_families(self, tmp_path):
        out = tmp_path / "locus.csv"
        assert run_cli(["locus", "--a", "0.5", "--b", "0",
                        "--samples", "24", "--out", str(out)]) == 0
        rows = read_csv(out)
        keys = {(r["kind"], r["sign"]) for r in rows}
        assert len(keys) == 3

    def test_generic_gamma_only_with_notice(self, tmp_path, capsys):
        out = tmp_path / "locus.csv"
        assert run_cli(["locus", "--a", "0.5", "--b", "0.2",
                        "--samples", "24", "--out", str(out)]) == 0
        assert "trace" in capsys.readouterr().err
        rows = read_csv(out)
        assert {r["kind"] for r in rows} == {"gamma+", "gamma-"}

    def test_sphere_exit_2(self):
        assert run_cli(["locus", "--a", "0", "--b", "0"]) == 2

    def test_csv_round_trip(self, tmp_path):
        out = tmp_path / "locus.csv"
        run_cli(["locus", "--a", "0.4", "--b", "0.4", "--samples", "16",
                 "--out", str(out)])
        params = EllipsoidParams(0.4, 0.4)
        for r in read_csv(out):
            p = Point4.from_real(float(r["x"]), float(r["y"]),
                                 float(r["u"]), float(r["v"]))
            assert abs(params.rho(p)) == pytest.approx(
                float(r["rho_residual"]), abs=1e-12)
            c = params.contractions(p)
            if r["kind"].startswith("gamma"):
                recomputed = abs(c.rzzLL)
            else:
                from pseudoherm.invariants import umbilical_functional

                recomputed = abs(umbilical_functional(c))
            assert recomputed == pytest.approx(
                float(r["defining_residual"]), abs=1e-12)


class TestTraceCommand:
    def test_degenerate_redirects(self, capsys):
        assert run_cli(["trace", "--a", "0.5", "--b", "0"]) == 2
        assert "locus" in capsys.readouterr().err

    def test_generic_trace_csv(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert run_cli(["trace", "--a", "0.5", "--b", "0.2", "--seed-grid", "8",
                        "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows
        for r in rows[:50]:
            assert float(r["rho_residual"]) <= 1e-8
            assert float(r["gamma_distance"]) > 1e-2

    def test_json_schema(self, tmp_path):
        out = tmp_path / "trace.json"
        assert run_cli(["trace", "--a", "0.5", "--b", "0.2", "--seed-grid", "8",
                        "--format", "json", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["format_version"] == 1
        assert doc["components"]
        comp = doc["components"][0]
        assert set(comp) == {"closed", "singular", "points", "residuals",
                             "gamma_distance"}
        assert len(comp["points"][0]) == 4

    def test_unwritable_path_exit_2(self, capsys):
        assert run_cli(["locus", "--a", "0.3", "--b", "0.3", "--samples", "8",
                        "--out", "/nonexistent-dir/x.csv"]) == 2
        assert "output path" in capsys.readouterr().err


class TestVerifyCommand:
    def test_single_suite_pass(self, capsys):
        assert run_cli(["verify", "--suite", "mainardi"]) == 0
        out = capsys.readouterr().out
        assert "mainardi" in out and "PASS" in out

    def test_suite_filter_unknown(self, capsys):
        assert run_cli(["verify", "--suite", "nope"]) == 2

    def test_injected_sign_error_fails_by_name(self, capsys, monkeypatch):
        # negative control: flip the sign of the chain-rule derivative and
        # the mainardi identity must fail, named in the report, exit 1
        true_fn = ambient.lbar_rzzLL
        monkeypatch.setattr(ambient, "lbar_rzzLL", lambda j: -true_fn(j))
        assert run_cli(["verify", "--suite", "mainardi"]) == 1
        out = capsys.readouterr().out
        assert "mainardi" in out and "FAIL" in out

    def test_fast_suites_all_pass(self, capsys):
        assert run_cli(["verify", "--suite", "sphere", "--suite", "levi",
                        "--suite", "logj"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 3 and "3/3" in out
