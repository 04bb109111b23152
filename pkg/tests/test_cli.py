import csv
import io
import json
import subprocess
import sys

import pytest

from hypercount.cli import CSV_COLUMNS, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_counterexample_rank4_exact(capsys):
    code, out, _ = run(["counterexample", "--ell", "10", "--rank", "4"], capsys)
    assert code == 0
    doc = json.loads(out)
    rep = doc["report"]
    assert rep["hyperplane_count"] > rep["bonin_bound"] == 1111
    assert rep["in_U"] and rep["beats_bound"] and rep["count_kind"] == "exact"
    prov = rep["provenance"]
    assert (prov["q"], prov["t"]) == (7, 5)
    assert {"deleted_point", "triangle", "basepoint"} <= set(prov)
    assert {"mqt", "tower"} <= set(rep["witness"])
    assert doc["matroid"]["type"] == "parallel_connection"


def test_counterexample_rank5_family(capsys):
    code, out, _ = run(["counterexample", "--ell", "10", "--rank", "5", "--mode", "family"], capsys)
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["count_kind"] == "lower_bound" and rep["hyperplane_count"] == 13924


def test_counterexample_usage_errors(capsys):
    code, _, err = run(["counterexample", "--ell", "9", "--rank", "4"], capsys)
    assert code == 1 and "ell >= 10" in err
    assert run(["counterexample", "--ell", "10", "--rank", "2"], capsys)[0] == 1
    assert run(["counterexample", "--ell", "10"], capsys)[0] == 1
    assert run(["counterexample", "--ell", "10", "--rank", "4", "--bogus"], capsys)[0] == 1
    assert run(["nosuch"], capsys)[0] == 1


def test_report_sweep_csv(capsys):
    code, out, _ = run(["report", "--ell", "10..12", "--rank", "4"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0].split(",") == CSV_COLUMNS
    assert [int(r["ell"]) for r in rows] == [10, 11, 12]
    assert all(r["beats_bound"] == "True" and r["in_U"] == "True" for r in rows)


def test_report_includes_rank3_row(capsys):
    code, out, _ = run(["report", "--ell", "10", "--rank", "3..5"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["r"]) for r in rows] == [3, 4, 5]
    assert (rows[0]["hyperplanes"], rows[0]["bound"]) == ("129", "111")


def test_report_empty_range(capsys):
    code, out, _ = run(["report", "--ell", "12..10", "--rank", "4"], capsys)
    assert code == 0 and out == ",".join(CSV_COLUMNS) + "\n"


def test_report_unsupported_range(capsys):
    assert run(["report", "--ell", "8..10", "--rank", "4"], capsys)[0] == 1
    assert run(["report", "--ell", "255", "--rank", "3"], capsys)[0] == 1
    assert run(["report", "--ell", "ten", "--rank", "4"], capsys)[0] == 1


def test_reports_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["counterexample", "--ell", "10", "--rank", "5", "--mode", "family", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    _, first, _ = run(["report", "--ell", "10", "--rank", "3..4", "--format", "text"], capsys)
    _, second, _ = run(["report", "--ell", "10", "--rank", "3..4", "--format", "text"], capsys)
    assert first == second and first.count("\n") == 2


def test_verify_written_report(tmp_path, capsys):
    p = tmp_path / "rep.json"
    assert main(["counterexample", "--ell", "10", "--rank", "4", "--out", str(p)]) == 0
    code, out, _ = run(["verify", "--in", str(p)], capsys)
    assert code == 0 and "beats_bound=True" in out


def test_verify_family_report(tmp_path, capsys):
    p = tmp_path / "rep.json"
    assert main(["counterexample", "--ell", "10", "--rank", "5", "--mode", "family", "--out", str(p)]) == 0
    assert run(["verify", "--in", str(p)], capsys)[0] == 0


def test_verify_tampered_report(tmp_path, capsys):
    p = tmp_path / "rep.json"
    assert main(["counterexample", "--ell", "10", "--rank", "4", "--out", str(p)]) == 0
    doc = json.loads(p.read_text())

    lied = json.loads(json.dumps(doc))
    lied["report"]["in_U"] = False
    p.write_text(json.dumps(lied))
    code, _, err = run(["verify", "--in", str(p)], capsys)
    assert code == 2 and "report_mismatch" in err

    broken = json.loads(json.dumps(doc))
    tri = broken["report"]["witness"]["mqt"]["triangle"]
    tri[1] = tri[0]
    p.write_text(json.dumps(broken))
    assert run(["verify", "--in", str(p)], capsys)[0] == 2


def test_verify_bad_input(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"type": "uniform", "r": 2,')
    code, _, err = run(["verify", "--in", str(p), "--ell", "10"], capsys)
    assert code == 1 and "line" in err
    assert run(["verify", "--in", str(tmp_path / "missing.json"), "--ell", "10"], capsys)[0] == 1
    p.write_text('{"type": "uniform", "r": 2, "n": 11}')
    assert run(["verify", "--in", str(p)], capsys)[0] == 1  # needs --ell
    code, out, _ = run(["verify", "--in", str(p), "--ell", "10"], capsys)
    assert code == 2 and "in_U=True" in out and "beats_bound=False" in out


def test_field_command(capsys):
    code, out, _ = run(["field", "--q", "4"], capsys)
    doc = json.loads(out)
    assert code == 0 and (doc["p"], doc["k"]) == (2, 2) and len(doc["mul"]) == 4
    assert run(["field", "--q", "6"], capsys)[0] == 1


def test_pg_command(capsys):
    code, out, _ = run(["pg", "--q", "3", "--format", "text"], capsys)
    assert code == 0 and out == "PG(2,3): 13 points, 13 lines\n"
    code, out, _ = run(["pg", "--q", "2", "--rank", "4"], capsys)
    assert len(json.loads(out)["points"]) == 15


def test_mqt_and_flats_commands(tmp_path, capsys):
    p = tmp_path / "m.json"
    assert main(["mqt", "--q", "7", "--t", "5", "--out", str(p)]) == 0
    doc = json.loads(p.read_text())
    assert doc["W2"] == doc["W2_formula"] == 129
    code, out, _ = run(["flats", "--in", str(p), "--rank", "2"], capsys)
    assert code == 0 and out == "129 flats of rank 2\n"
    code, out, _ = run(["flats", "--in", str(p), "--rank", "1", "--format", "json", "--threads", "2"], capsys)
    assert json.loads(out)["count"] == 40
    assert run(["flats", "--in", str(p), "--rank", "4"], capsys)[0] == 1
    assert run(["mqt", "--q", "3", "--t", "5"], capsys)[0] == 1


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "hypercount", "pg", "--q", "2", "--format", "text"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout == "PG(2,2): 7 points, 7 lines\n"
