"""
Integration tests for the heightcert command line.

Each test drives `main` in-process and checks exit codes and printed output.
"""
import csv
import json

import pytest

from adapters.csv_report import CSV_HEADER
from apps.cli.main import EXIT_INDETERMINATE, EXIT_OK, EXIT_USAGE, main

SMALL_CORPUS = """# small corpus
golden : -1,-1,1 ; galois=yes ; root_of_unity=no ; h=0.24060591253
phi6 : 1,-1,1 ; root_of_unity=yes
two : -2,1 ; h=0.69314718056
cbrt2 : -2,0,0,1 ; galois=no
reducible : -1,0,1
"""


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "small.txt"
    path.write_text(SMALL_CORPUS, encoding="utf-8")
    return path


@pytest.mark.integration
class TestAnalyzeCommand:
    def test_golden(self, capsys):
        assert main(["analyze", "--poly=-1,-1,1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "polynomial: x^2 - x - 1" in out
        assert "galois: certified" in out
        assert "rank: <= 1 certified" in out
        assert "status: ok" in out

    def test_positional_polynomial(self, capsys):
        assert main(["analyze", "1,0,1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "root of unity: order 4" in out
        assert "h: 0 (exact)" in out

    def test_reducible_input_is_not_an_error(self, capsys):
        assert main(["analyze", "--poly=-1,0,1"]) == EXIT_OK
        assert "status: not-irreducible" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [["analyze", "--poly=1,x"], ["analyze"], [], ["frobnicate"]])
    def test_usage_errors(self, argv, capsys):
        assert main(argv) == EXIT_USAGE
        assert "heightcert" in capsys.readouterr().err

    def test_constant_polynomial(self, capsys):
        assert main(["analyze", "7"]) == EXIT_USAGE
        assert "error: constant polynomial" in capsys.readouterr().out

    def test_indeterminate_exit_code(self, capsys):
        argv = ["analyze", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--precision-bits", "64", "--precision-cap", "64", "--target-width", "1e-60"]
        assert main(argv) == EXIT_INDETERMINATE
        assert "status: indeterminate" in capsys.readouterr().out

    def test_invalid_settings(self, capsys):
        assert main(["analyze", "1,1", "--precision-bits", "8192", "--precision-cap", "4096"]) == EXIT_USAGE
        assert "invalid settings" in capsys.readouterr().err


@pytest.mark.integration
class TestBoundsAndVerify:
    def test_bounds(self, capsys):
        assert main(["bounds", "--d", "10", "--rho", "3", "--eps", "1/2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("d=10 rho=3 eps=1/2")
        assert "main_bound" in out
        assert "# n_rho: 48" in out

    def test_bounds_rejects_nonpositive(self, capsys):
        assert main(["bounds", "--d", "0"]) == EXIT_USAGE
        assert main(["bounds", "--d", "5", "--eps", "-1"]) == EXIT_USAGE

    def test_verify_nrho(self, capsys):
        assert main(["verify", "nrho", "--rho-max", "20"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "suite nrho: checked 20, passed 20, failed 0" in out
        assert "equality: (b) rho=8" in out

    def test_verify_chain_small_grid(self, capsys):
        assert main(["verify", "chain", "--rho-max", "4", "--d-count", "4", "--d-max-exponent", "3"]) == EXIT_OK
        assert "FAILURE" not in capsys.readouterr().out

    def test_verify_unknown_suite(self):
        assert main(["verify", "everything"]) == EXIT_USAGE


@pytest.mark.integration
class TestCorpusCommand:
    def test_corpus_to_file(self, corpus_file, tmp_path):
        out = tmp_path / "report.csv"
        assert main(["corpus", str(corpus_file), "--out", str(out)]) == EXIT_OK
        rows = list(csv.reader(out.open(encoding="utf-8", newline="")))
        assert rows[0] == list(CSV_HEADER)
        by_label = {row[0]: dict(zip(CSV_HEADER, row, strict=True)) for row in rows[1:]}
        assert list(by_label) == ["golden", "phi6", "two", "cbrt2", "reducible"]
        assert by_label["golden"]["status"] == "ok"
        assert by_label["phi6"]["root_of_unity_order"] == "6"
        assert by_label["cbrt2"]["galois"] == "no-witness"
        assert by_label["cbrt2"]["rank_upper"] == ""
        assert by_label["reducible"]["status"] == "not-irreducible"

    def test_corpus_to_stdout(self, corpus_file, capsys):
        assert main(["corpus", str(corpus_file)]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 6

    def test_output_independent_of_jobs(self, corpus_file, tmp_path):
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        assert main(["corpus", str(corpus_file), "--jobs", "1", "--out", str(serial)]) == EXIT_OK
        assert main(["corpus", str(corpus_file), "--jobs", "2", "--out", str(parallel)]) == EXIT_OK
        assert serial.read_bytes() == parallel.read_bytes()

    def test_unreadable_line_becomes_error_row(self, tmp_path, capsys):
        path = tmp_path / "broken.txt"
        path.write_text("golden : -1,-1,1\nbad : 1,x,1\ntwo : -2,1\n", encoding="utf-8")
        assert main(["corpus", str(path)]) == EXIT_OK
        captured = capsys.readouterr()
        assert "line 2: not an integer coefficient" in captured.err
        rows = list(csv.reader(captured.out.splitlines()))
        by_label = {row[0]: dict(zip(CSV_HEADER, row, strict=True)) for row in rows[1:]}
        assert list(by_label) == ["golden", "bad", "two"]
        assert by_label["golden"]["status"] == "ok"
        assert by_label["bad"]["status"] == "error"
        assert by_label["two"]["status"] == "ok"

    def test_missing_source(self):
        assert main(["corpus"]) == EXIT_USAGE

    def test_write_bundled(self, tmp_path):
        path = tmp_path / "bundled.txt"
        assert main(["corpus", "--write-bundled", str(path)]) == EXIT_OK
        lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line and not line.startswith("#")]
        assert len(lines) == 40
        assert lines[0].startswith("golden : -1,-1,1")

    def test_events_file(self, corpus_file, tmp_path):
        events = tmp_path / "events.ndjson"
        assert main(["corpus", str(corpus_file), "--events", str(events), "--out", str(tmp_path / "r.csv")]) == EXIT_OK
        records = [json.loads(line) for line in events.read_text(encoding="utf-8").splitlines()]
        kinds = [r["event_type"] for r in records]
        assert kinds.count("corpus.entry_processed") == 5
        assert kinds[-1] == "corpus.completed"
        assert records[-1]["data"]["entries"] == 5

    def test_events_file_with_workers(self, corpus_file, tmp_path):
        events = tmp_path / "events.ndjson"
        argv = ["corpus", str(corpus_file), "--jobs", "2", "--events", str(events), "--out", str(tmp_path / "r.csv")]
        assert main(argv) == EXIT_OK
        records = [json.loads(line) for line in events.read_text(encoding="utf-8").splitlines()]
        analysed = [r["subject"] for r in records if r["event_type"] == "analysis.completed"]
        assert analysed == ["golden", "phi6", "two", "cbrt2", "reducible"]
        assert len({r["run_id"] for r in records}) == 1


@pytest.mark.integration
class TestHelp:
    @pytest.mark.parametrize("argv", [["--help"], ["corpus", "--help"]])
    def test_help_lists_exit_codes(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "exit codes:" in out
        for code in ("0  success", "1  usage error", "2  result indeterminate", "3  verification failures"):
            assert code in out
