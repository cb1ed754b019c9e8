import json
import subprocess
import sys
from pathlib import Path

import pytest

from relmon.cli import main

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_laws_vec(capsys):
    code, out, err = run(capsys, "laws", "--suite", "vec", "--size-cap", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "relmon/1" and doc["status"] == "pass"
    assert out.endswith("\n") and "wall-clock" in err and "wall" not in out
    ids = [c["id"] for c in doc["checks"]]
    assert ids == sorted(ids)


def test_sorted_keys(capsys):
    _, out, _ = run(capsys, "laws", "--suite", "semiring")
    doc = json.loads(out)
    assert out == json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "laws", "--suite", "nosuch")
    assert code == 2 and "nosuch" in err


def test_spec_failure_exits_one(capsys, tmp_path):
    doc = json.loads((SPECS / "two_object_poset.json").read_text())
    doc["functors"]["J"]["table"]["arrows"][2]["maps"] = [[1, 0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "laws", "--spec", str(path))
    assert code == 1
    assert json.loads(out)["first_failure"]["witness"]
    assert "law failure" in err


@pytest.mark.parametrize("spec, functor, size, count", [("plus_one", "F", 2, 4), ("empty", "F", 2, 0), ("powerset_k2", "P", 3, 7)])
def test_kan_examples(capsys, tmp_path, spec, functor, size, count):
    out = tmp_path / "lan.json"
    code, _, _ = run(capsys, "kan", "--spec", str(SPECS / f"{spec}.json"), "--functor", functor, "--object", str(size), "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["class_count"] == count == len(doc["representatives"])
    first = out.read_bytes()
    run(capsys, "kan", "--spec", str(SPECS / f"{spec}.json"), "--functor", functor, "--object", str(size), "--out", str(out))
    assert out.read_bytes() == first


def test_kan_iota_tables_cover_classes(capsys):
    _, out, _ = run(capsys, "kan", "--spec", str(SPECS / "plus_one.json"), "--functor", "F", "--object", "2")
    doc = json.loads(out)
    hit = {v for entry in doc["iota"] for v in entry["table"]}
    assert hit == set(range(doc["class_count"]))


def test_kan_schema_violation(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema": "relmon/1", "category": {"subuniverse": {"sizes": [0, 1]}}, "oops": 1}))
    code, _, err = run(capsys, "kan", "--spec", str(path), "--functor", "F", "--object", "1")
    assert code == 2 and "spec error: /:" in err


def test_kan_unknown_functor(capsys):
    code, _, _ = run(capsys, "kan", "--spec", str(SPECS / "plus_one.json"), "--functor", "G", "--object", "1")
    assert code == 2


def test_lam_nf(capsys):
    code, out, _ = run(capsys, "lam", "nf", r"(\ 0) 0", "--scope", "1")
    assert (code, out) == (0, "0\n")


def test_lam_subst(capsys):
    code, out, _ = run(capsys, "lam", "subst", "0 1", "--scope", "2", "--with", r"\ 0", "--with", "0", "--tgt-scope", "1")
    assert (code, out) == (0, "(\\ 0) 0\n")


def test_lam_fuel(capsys):
    code, out, err = run(capsys, "lam", "nf", r"(\ 0 0) (\ 0 0)", "--fuel", "10")
    assert code == 3 and out.startswith("partial") and "exhausted" in err


@pytest.mark.parametrize("text", ["0 (", r"\ 2"])
def test_lam_input_errors(capsys, text):
    code, _, err = run(capsys, "lam", "nf", text, "--scope", "1")
    assert code == 2 and "position" in err


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("RELMON_BUDGET", "10")
    code, _, err = run(capsys, "kan", "--spec", str(SPECS / "powerset_k2.json"), "--functor", "P", "--object", "3")
    assert code == 2 and "budget" in err
    monkeypatch.setenv("RELMON_BUDGET", "many")
    code, _, _ = run(capsys, "laws", "--suite", "semiring")
    assert code == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["laws", "--seed", "x"])
    assert e.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relmon.cli", "lam", "nf", r"(\ 0) 0", "--scope", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "0\n"
