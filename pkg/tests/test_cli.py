"""Command-line interface: argument handling, output formats, exit codes."""

import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from bloch_atlas import cli, enumeration, scenarios


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPair:
    def test_documented_example(self, capsys):
        code, out, err = run(
            ["pair", "--n", "4", "--gens", "3,6", "--decomp", "2x2",
             "--json"], capsys)
        assert code == 0
        assert err == ""
        payload = json.loads(out)
        assert set(payload) == {"total", "joint", "probability"}
        assert payload["total"] == pytest.approx(0.9428090, abs=1e-6)
        assert payload["joint"] == pytest.approx(2.0 / 3.0, abs=1e-6)
        assert payload["probability"] == pytest.approx(0.7071068, abs=1e-6)

    def test_json_round_trips_byte_identically(self, capsys):
        argv = ["pair", "--n", "4", "--gens", "3,6", "--decomp", "2x2",
                "--json"]
        _, first, _ = run(argv, capsys)
        _, second, _ = run(argv, capsys)
        assert first == second
        assert json.dumps(json.loads(first)) + "\n" == first

    def test_boundary_included_when_requested(self, capsys):
        code, out, _ = run(
            ["pair", "--n", "4", "--gens", "3,6", "--decomp", "2x2",
             "--boundary", "--json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert set(payload["boundary"]) == {
            "total_length", "classified_length", "boundary_probability",
            "interior_length"}

    def test_csv_output(self, capsys):
        code, out, _ = run(
            ["pair", "--n", "4", "--gens", "3,6", "--decomp", "2x2",
             "--csv"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == list(scenarios.CSV_COLUMNS)
        assert len(rows) == 2
        assert rows[1][0] == "4"
        assert rows[1][1] == "3+6"

    def test_plain_text_output(self, capsys):
        code, out, _ = run(
            ["pair", "--n", "4", "--gens", "3,6", "--decomp", "2x2"],
            capsys)
        assert code == 0
        assert "generators {3,6}" in out
        assert "probability" in out

    def test_tightening_tolerance_is_consistent(self, capsys):
        argv = ["pair", "--n", "6", "--gens", "8,13", "--decomp", "3x2",
                "--json"]
        _, loose, _ = run(argv + ["--tol", "1e-6"], capsys)
        _, tight, _ = run(argv + ["--tol", "1e-10"], capsys)
        a, b = json.loads(loose), json.loads(tight)
        for key in ("total", "joint", "probability"):
            assert abs(a[key] - b[key]) < 1e-6

    def test_duplicate_generators_rejected(self, capsys):
        code, _, err = run(
            ["pair", "--n", "4", "--gens", "3,3", "--decomp", "2x2"],
            capsys)
        assert code == 1
        assert "distinct" in err

    def test_out_of_range_generator_rejected(self, capsys):
        code, _, err = run(
            ["pair", "--n", "4", "--gens", "3,16", "--decomp", "2x2"],
            capsys)
        assert code == 1
        assert "out of range" in err

    def test_wrong_generator_count_rejected(self, capsys):
        code, _, err = run(
            ["pair", "--n", "4", "--gens", "3,6,8", "--decomp", "2x2"],
            capsys)
        assert code == 1

    def test_non_integer_generators_rejected(self, capsys):
        code, _, err = run(
            ["pair", "--n", "4", "--gens", "3,x", "--decomp", "2x2"],
            capsys)
        assert code == 1
        assert "integers" in err

    def test_unknown_level_count_rejected(self, capsys):
        code, _, err = run(
            ["pair", "--n", "5", "--gens", "3,6", "--decomp", "2x2"],
            capsys)
        assert code == 1

    def test_mismatched_decomposition_rejected(self, capsys):
        code, _, err = run(
            ["pair", "--n", "4", "--gens", "3,6", "--decomp", "3x2"],
            capsys)
        assert code == 1
        assert "decomp" in err

    def test_json_csv_mutually_exclusive(self, capsys):
        code, _, err = run(
            ["pair", "--n", "4", "--gens", "3,6", "--decomp", "2x2",
             "--json", "--csv"], capsys)
        assert code == 1


class TestSvg:
    ARGV = ["pair", "--n", "6", "--gens", "8,13", "--decomp", "3x2"]

    def test_writes_well_formed_svg(self, tmp_path, capsys):
        out = tmp_path / "section.svg"
        code, _, _ = run(self.ARGV + ["--svg", str(out)], capsys)
        assert code == 0
        text = out.read_text(encoding="utf-8")
        root = ET.fromstring(text)
        assert root.tag == "{http://www.w3.org/2000/svg}svg"
        assert root.get("version") == "1.1"
        assert root.get("width") == "800"
        assert root.get("height") == "800"
        assert root.get("viewBox") == "0 0 800 800"
        tags = {child.tag.split("}")[-1] for child in root.iter()}
        assert "polygon" in tags
        assert "polyline" in tags

    def test_svg_bytes_deterministic(self, tmp_path, capsys):
        first = tmp_path / "a.svg"
        second = tmp_path / "b.svg"
        run(self.ARGV + ["--svg", str(first)], capsys)
        run(self.ARGV + ["--svg", str(second)], capsys)
        assert first.read_bytes() == second.read_bytes()


class TestTriad:
    def test_default_decomposition_for_four_levels(self, capsys):
        code, out, _ = run(
            ["triad", "--n", "4", "--gens", "10,12,13", "--json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["total"] == pytest.approx(0.5235988, abs=1e-6)
        assert payload["probability"] == pytest.approx(0.913891, abs=1e-5)

    def test_decomposition_required_elsewhere(self, capsys):
        code, _, err = run(
            ["triad", "--n", "6", "--gens", "1,2,3"], capsys)
        assert code == 1
        assert "--decomp" in err

    def test_boundary_surface(self, capsys):
        code, out, _ = run(
            ["triad", "--n", "4", "--gens", "1,4,6",
             "--boundary-surface", "--json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["boundary"]["total_length"] > 0.0


class TestEnumerate:
    def test_writes_class_table(self, tmp_path, capsys):
        out = tmp_path / "classes.csv"
        code, stdout, _ = run(
            ["enumerate", "--n", "4", "--decomp", "2x2",
             "--out", str(out)], capsys)
        assert code == 0
        assert "5 classes" in stdout
        rows = list(csv.reader(out.open()))
        assert rows[0] == list(enumeration.CSV_COLUMNS)
        assert len(rows) == 1 + 5
        sizes = sorted(int(r[3]) for r in rows[1:])
        assert sizes == [2, 2, 2, 2, 4]

    def test_comma_joined_decompositions(self, tmp_path, capsys):
        out = tmp_path / "classes.csv"
        code, stdout, _ = run(
            ["enumerate", "--n", "4", "--decomp", "2x2,2x2",
             "--out", str(out)], capsys)
        assert code == 0

    def test_bad_worker_count_rejected(self, tmp_path, capsys):
        code, _, err = run(
            ["enumerate", "--n", "4", "--decomp", "2x2",
             "--out", str(tmp_path / "x.csv"), "--parallel", "0"], capsys)
        assert code == 1


class TestFullspace:
    def test_json_payload_shape(self, capsys):
        code, out, _ = run(
            ["fullspace", "--case", "real", "--constraints", "base",
             "--samples", "20000", "--seed", "7"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert set(payload) >= {"mean", "standard_error", "samples",
                                "seed", "target", "z_score"}
        assert payload["target"] == pytest.approx(0.00881215, abs=1e-8)
        assert abs(payload["z_score"]) < 5.0

    def test_deterministic_across_worker_counts(self, capsys):
        argv = ["fullspace", "--case", "real", "--constraints", "ppt",
                "--samples", "20000", "--seed", "3"]
        _, serial, _ = run(argv, capsys)
        _, parallel, _ = run(argv + ["--parallel", "2"], capsys)
        assert serial == parallel

    def test_unknown_constraints_rejected(self, capsys):
        code, _, err = run(
            ["fullspace", "--case", "real", "--constraints", "bogus",
             "--samples", "20000"], capsys)
        assert code == 1

    def test_sample_floor_enforced(self, capsys):
        code, _, err = run(
            ["fullspace", "--case", "real", "--constraints", "base",
             "--samples", "100"], capsys)
        assert code == 1


class TestCompare:
    def test_reference_table_passes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code, stdout, _ = run(
            ["compare", "--table", "n4_pairs", "--tol", "1e-6",
             "--out", str(out)], capsys)
        assert code == 0
        assert "failures 0" in stdout
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert report["n_checked"] == 15

    def test_impossible_tolerance_fails_with_exit_3(self, capsys):
        code, stdout, err = run(
            ["compare", "--table", "n4_pairs", "--tol", "1e-15"], capsys)
        assert code == 3
        assert "failed" in err

    def test_informational_table_never_fails(self, capsys):
        code, stdout, _ = run(
            ["compare", "--table", "n4_interior", "--tol", "1e-12"],
            capsys)
        assert code == 0
        assert "informational" in stdout

    def test_constants_table(self, capsys):
        code, stdout, _ = run(
            ["compare", "--table", "fullspace_constants"], capsys)
        assert code == 0

    def test_unknown_table_rejected(self, capsys):
        code, _, err = run(
            ["compare", "--table", "n99_pairs"], capsys)
        assert code == 1


class TestEntryPoints:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "bloch_atlas.cli", "pair", "--n", "4",
             "--gens", "3,6", "--decomp", "2x2", "--json"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["probability"] == pytest.approx(0.7071068, abs=1e-6)

    def test_missing_subcommand_is_usage_error(self, capsys):
        code, _, err = run([], capsys)
        assert code == 1
