import json
import subprocess
import sys

import numpy as np
import pytest

from benchpursuit.cli import main, parse_benchmark
from benchpursuit.dataio import ingest_csv, write_csv
from benchpursuit.errors import ConfigError
from benchpursuit.frames import DataMatrix


@pytest.fixture
def data_csv(tmp_path, rng):
    x = DataMatrix(
        rng.standard_normal((20, 3)),
        ("v0", "v1", "v2"),
        row_labels=tuple("t" if i % 2 else "n" for i in range(20)),
        label_name="tissue",
    )
    path = tmp_path / "data.csv"
    write_csv(x, path)
    return path


def _run_args(data_csv, out_dir, *extra):
    return [
        "run",
        "--data", str(data_csv),
        "--label-column", "tissue",
        "--benchmark", "permute:7",
        "--out", str(out_dir),
        "--restarts", "2",
        "--iterations", "4",
        "--qmc-points", "8",
        "--qmc-refine", "16",
        "--seed", "3",
        *extra,
    ]


class TestParseBenchmark:
    def test_file(self):
        spec = parse_benchmark("file:/tmp/b.csv")
        assert spec.kind == "external" and spec.path == "/tmp/b.csv"

    def test_permute(self):
        spec = parse_benchmark("permute:17")
        assert spec.kind == "permutation" and spec.seed == 17

    def test_class(self):
        spec = parse_benchmark("class:tissue=tumor")
        assert spec.kind == "class_split"
        assert spec.label_column == "tissue" and spec.level == "tumor"

    def test_lcg_two_part(self):
        spec = parse_benchmark("lcg:randu,1")
        assert spec.kind == "lcg" and spec.generator == "randu"
        assert spec.seed == 1 and spec.n_rows is None

    def test_lcg_with_rows(self):
        spec = parse_benchmark("lcg:minstd,5,400")
        assert spec.generator == "minstd" and spec.n_rows == 400

    @pytest.mark.parametrize(
        "text",
        [
            "file",
            "permute:",
            "permute:xyz",
            "class:nocol",
            "class:=tumor",
            "lcg:randu",
            "lcg:randu,a",
            "lcg:randu,1,2,3",
            "magic:1",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(ConfigError):
            parse_benchmark(text)


class TestRunCommand:
    def test_flags_only(self, data_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        assert (out / "report.json").is_file()
        stdout = capsys.readouterr().out
        assert "rank" in stdout and "report.json" in stdout

    def test_manifest_route(self, data_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        report = json.loads((out / "report.json").read_text())
        manifest_path = tmp_path / "m.json"
        manifest_path.write_text(json.dumps(report["manifest"]))
        out2 = tmp_path / "out2"
        assert main(["run", "--manifest", str(manifest_path), "--out", str(out2)]) == 0
        assert (out2 / "report.json").is_file()

    def test_flags_override_manifest(self, data_csv, tmp_path):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        manifest_path = tmp_path / "m.json"
        report = json.loads((out / "report.json").read_text())
        manifest_path.write_text(json.dumps(report["manifest"]))
        out2 = tmp_path / "out2"
        code = main(
            ["run", "--manifest", str(manifest_path), "--out", str(out2), "--restarts", "3"]
        )
        assert code == 0
        report2 = json.loads((out2 / "report.json").read_text())
        assert report2["restarts_requested"] == 3
        assert report2["manifest"]["search"]["restarts"] == 3

    def test_missing_required_flag(self, data_csv, tmp_path, capsys):
        code = main(["run", "--data", str(data_csv), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "--benchmark" in capsys.readouterr().err

    def test_bad_benchmark_flag(self, data_csv, tmp_path):
        args = _run_args(data_csv, tmp_path / "o")
        args[args.index("permute:7")] = "magic:1"
        assert main(args) == 1

    def test_bad_flag_value(self, data_csv, tmp_path):
        assert main(_run_args(data_csv, tmp_path / "o", "--restarts", "0")) == 1

    def test_unparseable_data_exits_2(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,huh\n")
        code = main(
            ["run", "--data", str(bad), "--benchmark", "permute:1",
             "--out", str(tmp_path / "o"), "--restarts", "1", "--iterations", "2"]
        )
        assert code == 2

    def test_missing_data_file_exits_2(self, tmp_path):
        code = main(
            ["run", "--data", str(tmp_path / "nope.csv"), "--benchmark", "permute:1",
             "--out", str(tmp_path / "o")]
        )
        assert code == 2

    def test_nonconvergence_exits_3(self, data_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        report = json.loads((out / "report.json").read_text())
        report["manifest"]["index"]["median_tol"] = 1e-30
        manifest_path = tmp_path / "m.json"
        manifest_path.write_text(json.dumps(report["manifest"]))
        out2 = tmp_path / "out2"
        code = main(["run", "--manifest", str(manifest_path), "--out", str(out2)])
        assert code == 3
        # outputs are still written
        assert (out2 / "report.json").is_file()
        assert "median" in capsys.readouterr().err


class TestFilterCommand:
    def test_keep_labels(self, data_csv, tmp_path, capsys):
        out = tmp_path / "kept.csv"
        code = main(
            ["filter", "--data", str(data_csv), "--label-column", "tissue",
             "--labels", "t", "--mode", "keep", "--out", str(out)]
        )
        assert code == 0
        kept = ingest_csv(out, label_column="tissue")
        assert kept.n == 10 and set(kept.row_labels) == {"t"}
        assert "10 of 20" in capsys.readouterr().out

    def test_remove_by_index_file(self, data_csv, tmp_path):
        idx = tmp_path / "rows.txt"
        idx.write_text("0\n1\n2\n")
        out = tmp_path / "kept.csv"
        code = main(
            ["filter", "--data", str(data_csv), "--label-column", "tissue",
             "--index-file", str(idx), "--out", str(out)]
        )
        assert code == 0
        original = ingest_csv(data_csv, label_column="tissue")
        kept = ingest_csv(out, label_column="tissue")
        assert np.array_equal(kept.values, original.values[3:])

    def test_selector_required(self, data_csv, tmp_path):
        base = ["filter", "--data", str(data_csv), "--out", str(tmp_path / "o.csv")]
        assert main(base) == 1
        assert main(base + ["--labels", "t", "--index-file", "x"]) == 1

    def test_unknown_label_exits_2(self, data_csv, tmp_path):
        code = main(
            ["filter", "--data", str(data_csv), "--label-column", "tissue",
             "--labels", "zz", "--mode", "keep", "--out", str(tmp_path / "o.csv")]
        )
        assert code == 2

    def test_bad_index_file(self, data_csv, tmp_path):
        idx = tmp_path / "rows.txt"
        idx.write_text("zero\n")
        code = main(
            ["filter", "--data", str(data_csv), "--label-column", "tissue",
             "--index-file", str(idx), "--out", str(tmp_path / "o.csv")]
        )
        assert code == 1

    def test_empty_result_exits_2(self, data_csv, tmp_path):
        code = main(
            ["filter", "--data", str(data_csv), "--label-column", "tissue",
             "--labels", "t,n", "--mode", "remove", "--out", str(tmp_path / "o.csv")]
        )
        assert code == 2


class TestSplitCommand:
    def test_split_after_run(self, data_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        capsys.readouterr()
        code = main(["split", "--report", str(out / "report.json")])
        assert code == 0
        stdout = capsys.readouterr().out
        assert "threshold" in stdout
        for tag in ("lownorm", "highnorm"):
            assert (out / f"solution_00_{tag}.svg").is_file()
            assert (out / f"solution_00_{tag}_frame.csv").is_file()
            assert (out / f"solution_00_{tag}_coords.csv").is_file()

    def test_threshold_flag(self, data_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        capsys.readouterr()
        code = main(
            ["split", "--report", str(out / "report.json"), "--threshold", "0.25"]
        )
        assert code == 0
        assert "threshold 0.25" in capsys.readouterr().out

    def test_solution_out_of_range_exits_2(self, data_csv, tmp_path):
        out = tmp_path / "out"
        assert main(_run_args(data_csv, out)) == 0
        code = main(["split", "--report", str(out / "report.json"), "--solution", "9"])
        assert code == 2

    def test_missing_report_exits_2(self, tmp_path):
        assert main(["split", "--report", str(tmp_path / "nope.json")]) == 2


def test_module_entry_help():
    proc = subprocess.run(
        [sys.executable, "-m", "benchpursuit", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "usage" in proc.stdout.lower()
