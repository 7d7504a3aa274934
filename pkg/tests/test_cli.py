import json

import pytest

from tournament_partition import paley, random_tournament
from tournament_partition.cli import main
from tournament_partition.core import read_tournament, write_tournament


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGen:
    def test_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(["gen", "random", "50", "7", "--out", str(a)]) == 0
        assert main(["gen", "random", "50", "7", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert read_tournament(a) == random_tournament(50, 7)

    def test_paley_stdout(self, capsys):
        code, out, _ = run(["gen", "paley", "7"], capsys)
        assert code == 0 and out.startswith("tournament 7\n")

    @pytest.mark.parametrize("spec", [["paley", "8"], ["random", "x", "1"], ["cube", "3"]])
    def test_bad_spec(self, spec, capsys):
        code, _, err = run(["gen", *spec], capsys)
        assert code == 1 and "error" in err


class TestPartition:
    def test_ok_and_verify(self, tmp_path, capsys):
        T = random_tournament(500, 0)
        src = tmp_path / "t.txt"
        write_tournament(T, src)
        out = tmp_path / "cert.json"
        code, _, _ = run(["partition", str(src), "--samples", "8", "--out", str(out)], capsys)
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["status"] == "ok" and doc["audit"]["passed"]
        assert "timing_s" not in doc["audit"]
        code, vout, _ = run(["verify", str(src), str(out), "--samples", "8"], capsys)
        assert code == 0 and json.loads(vout)["passed"]

    def test_tampered_cert_fails_audit(self, tmp_path, capsys):
        out = tmp_path / "cert.json"
        assert main(["partition", "random:500:0", "--samples", "4", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        doc["certificate"]["classes"][0] = list(range(300))
        out.write_text(json.dumps(doc))
        code, _, _ = run(["verify", "random:500:0", str(out), "--samples", "4"], capsys)
        assert code == 2

    def test_stage_failure(self, capsys):
        code, out, err = run(["partition", "transitive:50"], capsys)
        assert code == 4
        assert json.loads(out)["status"] == "stage-failure"
        assert "stage failure" in err

    def test_strict_refusal_cites_bound(self, capsys):
        code, _, err = run(["partition", "random:300:0", "--mode", "strict"], capsys)
        assert code == 1 and "1.6e+08" in err

    def test_missing_file(self, capsys):
        code, _, _ = run(["partition", "/nonexistent/file.txt"], capsys)
        assert code == 1


class TestCycles:
    def test_ok(self, tmp_path, capsys):
        out = tmp_path / "plan.json"
        code, _, _ = run(["cycles", "random:600:0", "--lengths", "300,300", "--out", str(out)], capsys)
        assert code == 0
        doc = json.loads(out.read_text())
        assert [len(c) for c in doc["plan"]["cycles"]] == [300, 300]
        code, _, _ = run(["verify", "random:600:0", str(out)], capsys)
        assert code == 0

    def test_bad_lengths(self, capsys):
        code, _, _ = run(["cycles", "random:600:0", "--lengths", "300,200"], capsys)
        assert code == 1

    def test_small_input_stage_failure(self, capsys):
        code, _, _ = run(["cycles", "paley:7", "--lengths", "3,4"], capsys)
        assert code == 4


class TestOracle:
    def test_reach(self, capsys):
        code, out, _ = run(["oracle", "reach", "count=20"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["passed"] and doc["checked"] == 20
        assert "seconds" not in doc

    def test_too_large(self, capsys):
        code, _, err = run(["oracle", "camion", "n<=8"], capsys)
        assert code == 3 and "budget" in err

    def test_bad_bound(self, capsys):
        code, _, _ = run(["oracle", "reach", "count"], capsys)
        assert code == 1

    def test_jobs(self, capsys):
        code, out, _ = run(["oracle", "domination", "count=20", "--jobs", "2"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["checked"] == 40 and doc["workers"] == 2


def test_bench(capsys):
    code, out, _ = run(["bench", "--sizes", "300", "--runs", "1", "--samples", "2"], capsys)
    assert code == 0 and json.loads(out)["bench"][0]["n"] == 300
