from __future__ import annotations

import json
import subprocess
import sys

import pytest

from matgeom.cli import main

S2F3 = "sym:2:GF(3)"
S2F2 = "sym:2:GF(2)"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_space_report(capsys):
    code, out, _ = run(capsys, "space", "--space", S2F3)
    data = json.loads(out)
    assert code == 0
    assert data["points"] == 27 and data["diameter"] == 2
    code, out, _ = run(capsys, "space", "--space", "grass:2:4:GF(2)")
    assert json.loads(out)["points"] == 35 and json.loads(out)["diameter"] == 2


def test_space_table(capsys):
    code, out, _ = run(capsys, "space", "--space", S2F2, "--format", "table")
    assert code == 0 and "points: 8" in out and "diameter: 3" in out


def test_axioms_exit_codes(capsys):
    code, out, _ = run(capsys, "axioms", "--space", S2F3)
    verdicts = {r["axiom"]: r["holds"] for r in json.loads(out)["results"]}
    assert code == 1 and verdicts == {"A1": True, "A2": True, "A3": True, "A4": False, "A5": True}
    code, out, _ = run(capsys, "axioms", "--space", S2F3, "--axioms", "A1,A2,A3,A5")
    assert code == 0
    code, out, _ = run(capsys, "axioms", "--space", "rect:2x2:GF(3)")
    assert code == 0
    code, out, _ = run(capsys, "axioms", "--space", S2F2)
    assert code == 1 and [r["axiom"] for r in json.loads(out)["results"] if not r["holds"]] == ["A5"]


def test_usage_errors(capsys):
    assert run(capsys, "space", "--space", "sym:2:GF(6)")[0] == 2
    assert run(capsys, "space", "--space", "rect:4x4:GF(3)", "--cap", "1000")[0] == 2
    assert run(capsys, "axioms", "--space", S2F3, "--axioms", "A9")[0] == 2
    assert run(capsys, "scenario", "nope")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["space"])
    assert exc.value.code == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--space", "rect:2x2:GF(3)")
    assert code == 0 and json.loads(out)["passed"]


def test_lemma21_command(capsys):
    assert run(capsys, "lemma21", "--space", "rect:2x2:GF(3)", "--jobs", "2")[0] == 0
    assert run(capsys, "lemma21", "--space", S2F3)[0] == 1


def test_falsify_command(capsys):
    code, out, _ = run(capsys, "falsify", "--space", "grass:2:4:GF(2)", "--perturbed", "50", "--group", "5", "--seed", "3")
    data = json.loads(out)
    assert code == 0 and data["perturbed_maps"] == 50 and data["seed"] == 3


def test_scenario_command(capsys, tmp_path):
    out_file = tmp_path / "s.json"
    code, _, _ = run(capsys, "scenario", "s2f3-a4", "--out", str(out_file))
    assert code == 0 and json.loads(out_file.read_text())["passed"]


def test_map_test_command(capsys, tmp_path):
    swap = tmp_path / "swap.map"
    assert run(capsys, "make-map", "--space", S2F2, "--kind", "antipodal:0", "--out", str(swap))[0] == 0
    code, out, _ = run(capsys, "map-test", "--map", str(swap), "--src", S2F2, "--tgt", S2F2)
    data = json.loads(out)
    assert code == 1 and data["dm_treu"] and not data["isomorphism"]

    ident = tmp_path / "id.map"
    run(capsys, "make-map", "--space", "rect:2x2:GF(3)", "--kind", "identity", "--out", str(ident))
    code, out, _ = run(capsys, "map-test", "--map", str(ident), "--space", "rect:2x2:GF(3)")
    assert code == 0

    trans = tmp_path / "t.map"
    run(capsys, "make-map", "--space", "rect:2x2:GF(3)", "--kind", "swap:0,1", "--out", str(trans))
    code, out, _ = run(capsys, "map-test", "--map", str(trans), "--space", "rect:2x2:GF(3)")
    assert code == 1 and json.loads(out)["dm_treu"] is False

    assert run(capsys, "map-test", "--map", str(tmp_path / "missing"), "--space", S2F2)[0] == 2
    assert run(capsys, "map-test", "--map", str(swap), "--space", S2F3)[0] == 2


def test_export_is_byte_stable(capsys, tmp_path):
    for fmt in ("dot", "json"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        assert run(capsys, "export", "--space", S2F2, "--format", fmt, "--out", str(a))[0] == 0
        assert run(capsys, "export", "--space", S2F2, "--format", fmt, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()
    dot = (tmp_path / "a.dot").read_text()
    assert dot.count(" -- ") == 12


def test_export_json_histogram(capsys):
    code, out, _ = run(capsys, "export", "--space", S2F3, "--format", "json")
    hist = json.loads(out)["distance_distribution"]
    assert hist["0"] == 27 and hist["1"] + hist["2"] == 27 * 26


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "matgeom", "scenario", "s2f2-a5"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["passed"]
