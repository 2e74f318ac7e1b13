import json
import math

import numpy as np
import pytest

from specbounds.cli import main


def _run(capsys, argv):
    status = main(argv)
    out = capsys.readouterr().out
    return status, out


def _run_json(capsys, argv):
    status, out = _run(capsys, argv)
    return status, json.loads(out)


class TestBoundsCommand:
    def test_wigner_16(self, capsys):
        status, report = _run_json(
            capsys, ["bounds", "--family", "wigner:d=16", "--replicates", "20"]
        )
        assert status == 0
        assert report["schema"] == 1
        assert report["report"]["bounds"]["bvh"] == pytest.approx(
            4.0 + math.sqrt(math.log(16)), rel=1e-12
        )

    def test_diagonal_unit_d1(self, capsys):
        status, report = _run_json(
            capsys, ["bounds", "--family", "diagonal_unit:d=1", "--replicates", "10"]
        )
        assert status == 0
        assert report["report"]["bounds"]["equiv_expression"] == 1.0

    def test_csv_input_file(self, capsys, tmp_path):
        path = tmp_path / "profile.csv"
        path.write_text("1,0\n0,1\n")
        status, report = _run_json(
            capsys, ["bounds", "--input", str(path), "--replicates", "10"]
        )
        assert status == 0
        assert report["profile"]["d"] == 2

    def test_missing_profile_source_is_usage_error(self, capsys):
        assert main(["bounds"]) == 1

    def test_unknown_family_is_input_error(self, capsys):
        assert main(["bounds", "--family", "nope:d=4"]) == 1

    def test_missing_file_is_input_error(self, capsys, tmp_path):
        assert main(["bounds", "--input", str(tmp_path / "absent.csv")]) == 1

    def test_out_file_written(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        status, _ = _run(
            capsys,
            ["bounds", "--family", "wigner:d=4", "--replicates", "10", "--out", str(out)],
        )
        assert status == 0
        assert json.loads(out.read_text())["command"] == "bounds"


class TestMcCommand:
    def test_zero_profile_all_quantities(self, capsys):
        status, report = _run_json(
            capsys,
            ["mc", "--family", "sparse_random:d=8,density=0,seed=1",
             "--quantity", "all", "--replicates", "20"],
        )
        assert status == 0
        assert set(report["estimates"]) == {"norm", "rowmax", "entrymax", "gdot", "ymax"}
        assert all(e["mean"] == 0.0 for e in report["estimates"].values())

    def test_rerun_is_byte_identical(self, capsys):
        argv = ["mc", "--family", "wigner:d=12", "--quantity", "all",
                "--replicates", "50", "--seed", "7"]
        _, first = _run_json(capsys, argv)
        _, second = _run_json(capsys, argv)
        assert json.dumps(first["estimates"]) == json.dumps(second["estimates"])

    def test_worker_count_invariance(self, capsys):
        base = ["mc", "--family", "diagonal_decay:d=24", "--quantity", "all",
                "--replicates", "40", "--seed", "3"]
        _, serial = _run_json(capsys, base + ["--workers", "1"])
        _, threaded = _run_json(capsys, base + ["--workers", "4"])
        assert json.dumps(serial["estimates"]) == json.dumps(threaded["estimates"])

    def test_bad_quantity_is_usage_error(self, capsys):
        assert main(["mc", "--family", "wigner:d=4", "--quantity", "trace"]) == 1


class TestVerifyCommand:
    def test_basic_check_passes(self, capsys):
        status, report = _run_json(
            capsys, ["verify", "--check", "basic", "--trials", "500", "--seed", "2"]
        )
        assert status == 0
        assert report["passed"] is True and report["failures"] == []

    def test_comparison_check_passes(self, capsys):
        status, report = _run_json(
            capsys, ["verify", "--check", "comparison", "--trials", "300"]
        )
        assert status == 0 and report["passed"]

    def test_split_check_passes(self, capsys):
        status, report = _run_json(
            capsys, ["verify", "--check", "split", "--trials", "200"]
        )
        assert status == 0 and report["passed"]

    def test_slice_check_reports_ratio_one_for_diagonal(self, capsys):
        status, report = _run_json(
            capsys,
            ["verify", "--check", "slice", "--family", "diagonal_decay:d=256",
             "--replicates", "5"],
        )
        assert status == 0
        outcome = report["reports"]["diagonal_decay:d=256"]
        assert outcome["ratio_slice_min"] == 1.0
        assert outcome["ratio_slice_max"] == 1.0
        assert outcome["decomposition"]["bands"] == [[1, 4], [5, 16], [17, 256]]

    def test_equiv_check_passes(self, capsys):
        status, report = _run_json(
            capsys,
            ["verify", "--check", "equiv", "--family", "wigner:d=16",
             "--replicates", "80"],
        )
        assert status == 0 and report["passed"]

    def test_impossible_tolerance_fails_with_exit_2(self, capsys):
        status, report = _run_json(
            capsys,
            ["verify", "--check", "basic", "--trials", "50", "--tol", "-1"],
        )
        assert status == 2
        assert report["passed"] is False
        assert report["failures"]
        assert {"trial", "d", "gamma", "gap"} <= set(report["failures"][0])

    def test_unknown_check_is_usage_error(self, capsys):
        assert main(["verify", "--check", "everything"]) == 1


class TestBallCommand:
    def test_wigner_unit_circle(self, capsys):
        status, out = _run(
            capsys, ["ball", "--family", "wigner:d=2", "--points", "4"]
        )
        assert status == 0
        lines = out.strip().splitlines()
        assert lines[0] == "theta,x1,x2"
        points = np.array([[float(tok) for tok in line.split(",")] for line in lines[1:]])
        np.testing.assert_allclose(np.hypot(points[:, 1], points[:, 2]), 1.0, rtol=1e-12)
        np.testing.assert_allclose(points[:, 0], [0, np.pi / 2, np.pi, 3 * np.pi / 2])

    def test_out_csv_written(self, capsys, tmp_path):
        out = tmp_path / "ball.csv"
        status, _ = _run(
            capsys,
            ["ball", "--family", "bandeira:delta=0.125", "--points", "16",
             "--out", str(out)],
        )
        assert status == 0
        assert out.read_text().startswith("theta,x1,x2\n")

    def test_wrong_dimension_is_input_error(self, capsys):
        assert main(["ball", "--family", "wigner:d=3"]) == 1


class TestScanCommand:
    def test_two_families_two_dims(self, capsys):
        status, report = _run_json(
            capsys,
            ["scan", "--families", "wigner,diagonal_unit", "--dims", "16,64",
             "--replicates", "30", "--seed", "5"],
        )
        assert status == 0
        assert len(report["rows"]) == 4
        for row in report["rows"]:
            assert "conjecture_ratio" in row and "norm_over_rowmax" in row
            assert set(row["estimates"]) == {"norm", "rowmax", "entrymax", "gdot", "ymax"}

    def test_scan_lower_bound_inequality(self, capsys):
        # rowmax <= norm within Monte Carlo resolution on every scanned row
        _, report = _run_json(
            capsys,
            ["scan", "--families", "wigner,diagonal_unit,band:w=2", "--dims", "16",
             "--replicates", "60", "--seed", "8"],
        )
        for row in report["rows"]:
            norm = row["estimates"]["norm"]
            rowmax = row["estimates"]["rowmax"]
            combined = math.hypot(norm["stderr"], rowmax["stderr"])
            assert rowmax["mean"] <= norm["mean"] + 4.0 * combined

    def test_rerun_reproduces_rows(self, capsys):
        argv = ["scan", "--families", "diagonal_decay", "--dims", "8,16",
                "--replicates", "25", "--seed", "4"]
        _, first = _run_json(capsys, argv)
        _, second = _run_json(capsys, argv)
        assert json.dumps(first["rows"]) == json.dumps(second["rows"])

    def test_empty_families_is_usage_error(self, capsys):
        assert main(["scan", "--families", "", "--dims", "4"]) == 1
