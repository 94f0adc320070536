import json

import pytest

from clusterdenom.cli import run


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    assert "clusterdenom" in capsys.readouterr().out


def test_verify_a2(tmp_path):
    out = tmp_path / "report.json"
    assert run(["verify", "--type", "A2", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["verdict"] == "verified"
    assert report["clusters_per_class"] == [5]
    assert report["variables_per_class"] == [5]


def test_verify_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["verify", "--type", "A3", "--jobs", "1", "--out", str(a)]) == 0
    assert run(["verify", "--type", "A3", "--jobs", "1", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_bad_matrix(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "b": [[0, 1], [1, 0]]}))
    assert run(["verify", "--matrix", str(bad)]) == 1


def test_verify_requires_one_source(tmp_path):
    assert run(["verify"]) == 1
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"n": 2, "b": [[0, 1], [-1, 0]]}))
    assert run(["verify", "--type", "A2", "--matrix", str(m)]) == 1


def test_verify_matrix_file(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"n": 2, "b": [[0, 1], [-1, 0]]}))
    out = tmp_path / "r.json"
    assert run(["verify", "--matrix", str(m), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "verified"


def test_verify_budget_exit_code(tmp_path):
    ck = tmp_path / "ck.json"
    code = run(
        ["verify", "--type", "D4", "--max-classes", "1", "--checkpoint", str(ck), "--out", str(tmp_path / "r.json")]
    )
    assert code == 3
    saved = json.loads(ck.read_text())
    assert len(saved["classes"]) == 1
    # resume completes the run
    assert run(["verify", "--type", "D4", "--checkpoint", str(ck), "--resume", "--out", str(tmp_path / "r2.json")]) == 0


def test_enumerate_json(tmp_path):
    out = tmp_path / "enum.json"
    assert run(["enumerate", "--type", "A2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["clusters"] == 5 and data["variables"] == 5
    assert len(data["dmatrices"]) == 5
    assert data["dmatrices"][0] == [[-1, 0], [0, -1]]


def test_enumerate_engines_agree(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["enumerate", "--type", "B3", "--engine", "laurent", "--out", str(a)]) == 0
    assert run(["enumerate", "--type", "B3", "--engine", "recurrence", "--out", str(b)]) == 0
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["clusters"] == db["clusters"] and da["variables"] == db["variables"]
    norm = lambda mats: sorted(sorted(map(tuple, m)) for m in mats)
    assert norm(da["dmatrices"]) == norm(db["dmatrices"])


def test_disc_list_arcs(tmp_path):
    out = tmp_path / "arcs.json"
    assert run(["disc", "--n", "4", "--list-arcs", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["arcs"]) == 16
    kinds = {a["kind"] for a in data["arcs"]}
    assert kinds == {"chord", "radius"}


def test_disc_list_triangulations(tmp_path):
    out = tmp_path / "tris.json"
    assert run(["disc", "--n", "4", "--list-triangulations", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["triangulations"]) == 50


def test_disc_rejects_small_n():
    assert run(["disc", "--n", "3", "--list-arcs"]) == 1


def test_disc_check(tmp_path):
    out = tmp_path / "check.json"
    assert run(["disc-check", "--n", "4", "--bound", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["ok"] and data["collisions"] == []


def test_crosscheck(tmp_path):
    out = tmp_path / "cc.json"
    assert run(["crosscheck", "--n", "4", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["ok"] and data["pairs"] == 16


def test_usage_error_exit_code():
    assert run(["verify", "--bogus"]) == 1
