"""CLI tests: serialization round trips, output stability, exit codes."""

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from greenpoles import cli
from greenpoles.cli import (
    EXIT_MATH,
    EXIT_OK,
    EXIT_SPEC,
    EXIT_VERIFY,
    JobSpec,
    canonical_spec_text,
    cmd_verify,
    main,
)
from greenpoles.properties import PropertyReport, Violation

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def run_main(argv):
    out = io.StringIO()
    old = sys.stdout
    sys.stdout = out
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, out.getvalue()


class TestSerialization:
    def test_round_trip_is_canonical(self):
        raw = json.loads((JOBS / "collinear_two_pole.json").read_text())
        once = canonical_spec_text(raw)
        twice = canonical_spec_text(json.loads(once))
        assert once == twice

    def test_complex_pairs(self):
        assert cli.complex_from_jsonable([1.5, -2.0]) == 1.5 - 2.0j
        with pytest.raises(cli.SpecFileError):
            cli.complex_from_jsonable([1.0])

    def test_domain_variants_round_trip(self):
        for spec in (
            {"variant": "unit_disc"},
            {"variant": "polydisc", "n": 3},
            {"variant": "gauge_ball", "gauge": "abs_plus_sqrt_abs", "n": 2},
            {"variant": "reinhardt_power", "alpha": [1, 2]},
            {"variant": "product", "left": {"variant": "unit_disc"},
             "right": {"variant": "polydisc", "n": 2}},
            {"variant": "scaled", "r": 0.5, "inner": {"variant": "unit_disc"}},
        ):
            dom = cli.domain_from_jsonable(spec)
            assert cli.domain_to_jsonable(dom) == spec

    def test_bad_specs_rejected(self):
        with pytest.raises(cli.SpecFileError):
            cli.domain_from_jsonable({"variant": "banana"})
        with pytest.raises(cli.SpecFileError):
            JobSpec.from_jsonable({"command": "eval"})
        with pytest.raises(cli.SpecFileError):
            JobSpec.from_jsonable("not a dict")


class TestEval:
    def test_reference_value(self):
        code, out = run_main(
            ["eval", "--spec", str(JOBS / "collinear_two_pole.json"),
             "--format", "records"]
        )
        assert code == EXIT_OK
        row = json.loads(out)
        assert abs(row["value"] - 1.0 / 6.0) <= 1e-12

    def test_byte_identical_output(self):
        args = ["eval", "--spec", str(JOBS / "disc_green.json"), "--format", "records"]
        assert run_main(args) == run_main(args)

    def test_no_exact_formula_exits_3(self, tmp_path):
        spec = json.loads((JOBS / "collinear_two_pole.json").read_text())
        spec["domain"] = {"variant": "gauge_ball", "gauge": "abs_sum", "n": 2}
        spec["weight"]["entries"][0]["point"] = [[-0.25, 0.0], [0.0, 0.0]]
        spec["weight"]["entries"][1]["point"] = [[0.25, 0.0], [0.0, 0.0]]
        spec["point"] = [[0.0, 0.0], [0.25, 0.0]]
        path = tmp_path / "ball.json"
        path.write_text(json.dumps(spec))
        code, _ = run_main(["eval", "--spec", str(path)])
        assert code == EXIT_MATH

    def test_missing_file_exits_2(self):
        code, _ = run_main(["eval", "--spec", "/nonexistent.json"])
        assert code == EXIT_SPEC

    def test_malformed_json_exits_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        code, _ = run_main(["eval", "--spec", str(path)])
        assert code == EXIT_SPEC

    def test_domain_error_exits_3(self, tmp_path):
        spec = json.loads((JOBS / "disc_green.json").read_text())
        spec["point"] = [[2.0, 0.0]]  # outside the disc
        path = tmp_path / "outside.json"
        path.write_text(json.dumps(spec))
        code, _ = run_main(["eval", "--spec", str(path)])
        assert code == EXIT_MATH


class TestEstimate:
    def test_coman_bound(self):
        code, out = run_main(
            ["estimate", "--spec", str(JOBS / "twin_pole_coman.json"),
             "--format", "records"]
        )
        assert code == EXIT_OK
        row = json.loads(out.splitlines()[0])
        assert row["upper"] <= 4 * 0.04 + 1e-9

    def test_seed_required(self, tmp_path):
        spec = json.loads((JOBS / "twin_pole_coman.json").read_text())
        del spec["search"]
        path = tmp_path / "noseed.json"
        path.write_text(json.dumps(spec))
        code, _ = run_main(["estimate", "--spec", str(path)])
        assert code == EXIT_SPEC
        # the --seed flag satisfies the requirement
        code, _ = run_main(["estimate", "--spec", str(path), "--seed", "0"])
        assert code == EXIT_OK

    def test_empty_weight_gives_unit_interval(self, tmp_path):
        spec = {
            "command": "estimate",
            "invariant": "green",
            "domain": {"variant": "polydisc", "n": 2},
            "weight": {"entries": [], "integer_valued": False},
            "point": [[0.0, 0.0], [0.1, 0.0]],
            "search": {"seed": 0},
        }
        path = tmp_path / "empty.json"
        path.write_text(json.dumps(spec))
        code, out = run_main(["estimate", "--spec", str(path), "--format", "records"])
        assert code == EXIT_OK
        row = json.loads(out.splitlines()[0])
        assert row["lower"] == row["upper"] == 1.0

    def test_witness_output(self):
        code, out = run_main(
            ["estimate", "--spec", str(JOBS / "twin_pole_coman.json"), "--witness"]
        )
        assert code == EXIT_OK

    def test_byte_identical_runs(self):
        args = ["estimate", "--spec", str(JOBS / "twin_pole_coman.json"),
                "--format", "records"]
        assert run_main(args) == run_main(args)

    def test_green_estimate_contains_exact_value(self, tmp_path):
        spec = json.loads((JOBS / "collinear_two_pole.json").read_text())
        spec["command"] = "estimate"
        spec["search"] = {"seed": 0}
        path = tmp_path / "green.json"
        path.write_text(json.dumps(spec))
        code, out = run_main(["estimate", "--spec", str(path), "--format", "records"])
        assert code == EXIT_OK
        row = json.loads(out.splitlines()[0])
        assert row["lower"] <= 1.0 / 6.0 <= row["upper"]
        assert row["upper"] - row["lower"] <= 1e-4

    def test_dmin_estimate_with_witness(self, tmp_path):
        spec = json.loads((JOBS / "collinear_two_pole.json").read_text())
        spec["command"] = "estimate"
        spec["invariant"] = "dmin"
        spec["search"] = {"seed": 0, "restarts": 6, "max_evals": 120}
        path = tmp_path / "dmin.json"
        path.write_text(json.dumps(spec))
        code, out = run_main(
            ["estimate", "--spec", str(path), "--format", "records", "--witness"]
        )
        assert code == EXIT_OK
        rows = [json.loads(line) for line in out.splitlines()]
        assert rows[0]["lower"] > 0
        assert any(r.get("witness") == "lower" for r in rows[1:])


class TestVerify:
    def test_small_suite_passes(self):
        code, out = run_main(
            ["verify", "--ids", "axiom_E,axiom_M", "--seed", "0", "--trials", "50"]
        )
        assert code == EXIT_OK
        assert out.count("PASS") == 2

    def test_empty_ids_is_noop_success(self):
        code, out = run_main(["verify", "--ids", "", "--seed", "0"])
        assert code == EXIT_OK
        assert out == ""

    def test_unknown_id_exits_2(self):
        code, _ = run_main(["verify", "--ids", "nope", "--seed", "0"])
        assert code == EXIT_SPEC

    def test_violation_maps_to_exit_4(self, monkeypatch):
        failing = PropertyReport(
            "axiom_E", 5, 1e-10, (Violation("trial=1", 1.0, 0.5, 0.5),), 0.5
        )
        import greenpoles.properties as props

        monkeypatch.setattr(props, "run_property", lambda *a, **k: failing)
        out = io.StringIO()
        code = cmd_verify(["axiom_E"], 0, 5, "text", out)
        assert code == EXIT_VERIFY
        assert "FAIL" in out.getvalue()
        assert "instance[trial=1]" in out.getvalue()  # minimal reproducer printed

    def test_records_format(self):
        code, out = run_main(
            ["verify", "--ids", "axiom_E", "--seed", "0", "--trials", "20",
             "--format", "records"]
        )
        assert code == EXIT_OK
        rec = json.loads(out.splitlines()[0])
        assert rec["property_id"] == "axiom_E" and rec["ok"]

    def test_full_suite_small_trials(self):
        code, out = run_main(["verify", "--seed", "0", "--trials", "40"])
        assert code == EXIT_OK
        assert out.count("PASS") == 10 and "FAIL" not in out

    def test_thread_env_validation(self, monkeypatch):
        monkeypatch.setenv("GREENPOLES_THREADS", "not-a-number")
        code, _ = run_main(["reproduce"])
        assert code == EXIT_SPEC
        monkeypatch.setenv("GREENPOLES_THREADS", "2")
        code, _ = run_main(
            ["verify", "--ids", "axiom_E", "--seed", "0", "--trials", "10"]
        )
        assert code == EXIT_OK


class TestReproduce:
    def test_all_rows_pass(self):
        code, out = run_main(["reproduce", "--format", "records"])
        assert code == EXIT_OK
        rows = [json.loads(line) for line in out.splitlines()]
        assert len(rows) >= 7
        assert all(r["status"] == "PASS" for r in rows)
        by_id = {r["row"]: r for r in rows}
        assert by_id["gauge_abs_sum_11"]["computed"] == 2.0

    def test_csv_format(self):
        code, out = run_main(["reproduce", "--format", "csv"])
        assert code == EXIT_OK
        assert out.splitlines()[0] == "row,description,computed,expected,status"


class TestSubprocessEntry:
    def test_module_entrypoint(self):
        out = subprocess.run(
            [sys.executable, "-m", "greenpoles", "eval", "--spec",
             str(JOBS / "disc_green.json"), "--format", "records"],
            capture_output=True, text=True,
        )
        assert out.returncode == 0
        assert json.loads(out.stdout)["value"] == 0.25

    def test_argparse_usage_error_exits_2(self):
        out = subprocess.run(
            [sys.executable, "-m", "greenpoles", "eval"],
            capture_output=True, text=True,
        )
        assert out.returncode == 2
