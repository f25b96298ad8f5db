import json
import math
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from starlap import cli
from starlap.oracle import read_matrix

SCHEMAS = {name: cli.schema(name) for name in ("spectrum", "verify", "plotdata")}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def validate(doc, name):
    jsonschema.validate(doc, SCHEMAS[name])


class TestSpectrum:
    def test_equal_counts(self, capsys):
        code, out, _ = run(["spectrum", "--n-plus", "1", "--n-minus", "1", "--k-max", "3",
                            "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        validate(doc, "spectrum")
        kinds = [p["kind"] for p in doc["points"]]
        assert kinds == ["weyl_zero"] * 6

    def test_single_minus(self, capsys):
        code, out, _ = run(["spectrum", "--n-plus", "2", "--n-minus", "1", "--k-max", "2"], capsys)
        pts = json.loads(out)["points"]
        inh = [p for p in pts if p["kind"] != "weyl_zero"]
        assert [(p["value"], p["multiplicity"]) for p in inh] == [(np.pi**2, 1), ((2 * np.pi) ** 2, 1)]
        assert all(p["value"] > 0 for p in inh)

    def test_fields(self, capsys):
        _, out, _ = run(["spectrum", "--k-max", "2"], capsys)
        for p in json.loads(out)["points"]:
            if p["kind"] == "weyl_zero":
                assert p["bracket_lo"] < p["value"] < p["bracket_hi"]
                assert p["secular_residual"] <= 1e-11
            else:
                assert p["bracket_lo"] is None and p["secular_residual"] is None

    def test_both_operators(self, capsys):
        _, out, _ = run(["spectrum", "--operator", "both", "--k-max", "1"], capsys)
        ops = [p["operator"] for p in json.loads(out)["points"]]
        assert ops == ["A", "A", "B", "B", "B"]

    def test_deterministic(self, capsys, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            run(["spectrum", "--n-plus", "3", "--n-minus", "2", "--k-max", "20", "-o", str(p)], capsys)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_csv_round_trip(self, capsys):
        _, out_json, _ = run(["spectrum", "--operator", "both", "--k-max", "5"], capsys)
        _, out_csv, _ = run(["spectrum", "--operator", "both", "--k-max", "5", "--format", "csv"], capsys)
        assert "\r" not in out_csv
        assert out_csv.splitlines()[0] == ",".join(cli.SPECTRUM_COLUMNS)
        rows = cli.load_csv(out_csv, "spectrum")
        ref = json.loads(out_json)["points"]
        doc = dict(json.loads(out_json), points=rows)
        validate(doc, "spectrum")
        for a, b in zip(rows, ref):
            for key, val in b.items():
                if isinstance(val, float):
                    assert math.isclose(a[key], val, rel_tol=1e-15, abs_tol=0)
                else:
                    assert a[key] == val

    def test_root_failure_exit_1(self, capsys):
        code, _, err = run(["spectrum", "--tol", "1e-30"], capsys)
        assert code == 1 and "residual" in err

    @pytest.mark.parametrize("argv", [
        ["spectrum", "--n-plus", "0"],
        ["spectrum", "--k-max", "0"],
        ["spectrum", "--tol", "-1"],
        ["spectrum", "--format", "xml"],
        ["spectrum", "--mesh", "4"],
        ["spectrum", "--bogus"],
        [],
    ])
    def test_usage_exit_2(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 2 and "usage" in err


class TestRecover:
    def test_round_trip(self, capsys):
        _, out, _ = run(["spectrum", "--n-plus", "3", "--n-minus", "2", "--k-max", "1",
                         "--format", "csv"], capsys)
        eta1 = [r["value"] for r in cli.load_csv(out, "spectrum") if r["k"] == 1][0]
        code, out, _ = run(["recover", "--eta1", repr(eta1)], capsys)
        assert code == 0 and out == "1.50000000000\n"

    def test_equal(self, capsys):
        code, out, _ = run(["recover", "--eta1", "5.5933213620153309807"], capsys)
        assert code == 0 and float(out) == 1.0

    @pytest.mark.parametrize("eta", ["9.8696", "9.87", "0", "-1", "2.0", "nan", "inf"])
    def test_rejects(self, eta, capsys):
        code, _, _ = run(["recover", "--eta1", eta], capsys)
        assert code == 2


class TestVerify:
    def test_oracle_suite(self, capsys):
        code, out, _ = run(["verify", "--suite", "oracle", "--n-plus", "2", "--n-minus", "1",
                            "--mesh", "2000"], capsys)
        doc = json.loads(out)
        validate(doc, "verify")
        assert code == 0 and doc["pass"]
        assert doc["suites"][0]["max_residual"] < 5e-3

    def test_green_suite(self, capsys):
        code, out, _ = run(["verify", "--suite", "green", "--mesh", "2000"], capsys)
        assert code == 0 and json.loads(out)["suites"][0]["max_residual"] < 1e-8

    def test_similarity_suite(self, capsys):
        code, out, _ = run(["verify", "--suite", "similarity"], capsys)
        res = json.loads(out)["suites"][0]
        assert code == 0 and res["pass"]

    def test_order_and_dedup(self, capsys):
        _, out, _ = run(["verify", "--suite", "krein", "--suite", "branch", "--suite", "krein",
                         "--mesh", "500"], capsys)
        assert [s["suite"] for s in json.loads(out)["suites"]] == ["branch", "krein"]

    def test_failure_exit_1(self, capsys):
        # the finite-section Riesz threshold is not met (see the acceptance suite)
        code, out, _ = run(["verify", "--suite", "riesz", "--n-plus", "1", "--n-minus", "1",
                            "--mesh", "1000"], capsys)
        doc = json.loads(out)
        assert code == 1 and not doc["pass"]
        assert doc["suites"][0]["max_residual"] > 1.10

    def test_non_convergence_exit_3(self, capsys, monkeypatch):
        from starlap import OracleNonConvergence, suites

        def stuck(sig, mesh, rng):
            raise OracleNonConvergence("ARPACK stalled")

        monkeypatch.setitem(suites.SUITES, "oracle", stuck)
        code, out, _ = run(["verify", "--suite", "oracle", "--suite", "branch"], capsys)
        doc = json.loads(out)
        validate(doc, "verify")
        assert code == 3
        assert doc["suites"][1]["details"]["error"] == "ARPACK stalled"

    def test_threads_env(self, capsys, monkeypatch):
        argv = ["verify", "--suite", "branch", "--suite", "interlacing", "--seed", "7"]
        monkeypatch.setenv("STARLAP_THREADS", "1")
        _, one, _ = run(argv, capsys)
        monkeypatch.setenv("STARLAP_THREADS", "4")
        _, four, _ = run(argv, capsys)
        assert one == four
        monkeypatch.setenv("STARLAP_THREADS", "zero")
        assert run(argv, capsys)[0] == 2

    def test_seed_changes_cases(self, capsys):
        outs = [run(["verify", "--suite", "green", "--mesh", "200", "--seed", s], capsys)[1]
                for s in ("1", "2")]
        assert outs[0] != outs[1]

    def test_csv(self, capsys):
        _, out, _ = run(["verify", "--suite", "branch", "--format", "csv"], capsys)
        rows = cli.load_csv(out, "verify")
        assert rows[0]["suite"] == "branch" and rows[0]["pass"] is True


class TestPlotdata:
    def test_intersections(self, capsys):
        _, out, _ = run(["plotdata", "--n-plus", "1", "--n-minus", "1"], capsys)
        doc = json.loads(out)
        validate(doc, "plotdata")
        mus = [r["mu"] for r in doc["rows"] if r["kind"] == "intersection"]
        np.testing.assert_allclose(mus[:3], [2.3650, 5.4978, 8.6394], atol=1e-4)
        assert all(r["mu"] <= 15.0 for r in doc["rows"])

    def test_poles(self, capsys):
        _, out, _ = run(["plotdata", "--format", "csv"], capsys)
        rows = cli.load_csv(out, "plotdata")
        poles = [r for r in rows if r["kind"] == "pole"]
        assert [r["mu"] for r in poles] == [k * math.pi for k in range(1, 5)]
        assert all(r["neg_cot"] is None for r in poles)

    def test_crossings_solve_curves(self, capsys):
        _, out, _ = run(["plotdata", "--n-plus", "3", "--n-minus", "1"], capsys)
        for r in json.loads(out)["rows"]:
            if r["kind"] == "intersection":
                assert abs(r["neg_cot"] - r["ratio_coth"]) < 1e-10

    def test_stable_header(self, capsys):
        outs = [run(["plotdata", "--format", "csv", "--samples", "50"], capsys)[1] for _ in range(2)]
        assert outs[0] == outs[1]
        assert outs[0].splitlines()[0] == "kind,mu,neg_cot,ratio_coth,k"


class TestDumpMatrix:
    def test_dump(self, capsys, tmp_path):
        path = tmp_path / "m.txt"
        code, _, _ = run(["dump-matrix", "--n-plus", "1", "--n-minus", "2", "--mesh", "10",
                          "-o", str(path)], capsys)
        assert code == 0
        header, A = read_matrix(path)
        assert header == (1, 2, 10, "second") and A.shape == (27, 27)

    def test_needs_output(self, capsys):
        assert run(["dump-matrix"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "starlap", "recover", "--eta1", "9.8696"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "starlap", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "starlap" in proc.stdout


def test_oracle_suite_tied_clusters(capsys):
    # pi^2 and -pi^2 tie in modulus at the cut for (2,6)
    code, out, _ = run(["verify", "--suite", "oracle", "--n-plus", "2", "--n-minus", "6"], capsys)
    res = json.loads(out)["suites"][0]
    assert code == 0 and res["cases"] == 8 and res["max_residual"] < 5e-3
