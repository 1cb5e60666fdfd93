import json
import subprocess
import sys

import pytest

from monadpreserve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_powerset_commutativity(capsys):
    code, out, _ = run(capsys, "check", "powerset", "theories/commutative.theory")
    assert code == 0 and "PreservedUpToBound" in out


def test_check_dist_idempotence_randomized(capsys):
    code, out, _ = run(capsys, "check", "dist", "theories/idempotent.theory", "--randomized", "--seed", "1")
    assert code == 1 and "Violated" in out and "witness" in out


def test_check_powerset_plus_absorption(capsys):
    code, out, _ = run(capsys, "check", "powerset+", "theories/absorption.theory", "--max-carrier", "2")
    assert code == 0 and out.count("PreservedUpToBound") == 2


def test_dist_needs_randomized(capsys):
    code, _, err = run(capsys, "check", "dist", "theories/idempotent.theory")
    assert code == 2 and "--randomized" in err


def test_budget_exhaustion_exit_code(capsys):
    code, out, _ = run(capsys, "check", "powerset", "theories/commutative.theory", "--budget", "100")
    assert code == 3 and "Unknown" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "classify", "theories/bad_arity.theory")
    assert code == 2 and "line 3" in err


@pytest.mark.parametrize("argv", [["check", "nosuch", "theories/idempotent.theory"],
                                  ["check", "powerset", "theories/missing.theory"],
                                  ["monoid", "presentations/missing.txt"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_classify_rows(capsys):
    code, out, _ = run(capsys, "classify", "theories/classes.theory", "--json")
    assert code == 0
    rows = json.loads(out)["equations"]
    assert rows[0]["classes"]["strict_drop"]
    assert rows[3]["classes"]["strict_dup"]


def test_classify_reports_discerning(capsys):
    code, out, _ = run(capsys, "classify", "theories/discerning.theory")
    assert code == 0 and "2-discerning: Discerning" in out


def test_props_multiset_f2(capsys):
    code, out, _ = run(capsys, "props", "multiset:f2.json", "--json")
    doc = {v["property"]: v["holds"] for v in json.loads(out)["verdicts"]}
    assert code == 0 and doc["affine"] == "No" and doc["relevant"] == "No"


def test_props_writer_n_relevance(capsys):
    code, out, _ = run(capsys, "props", "writer:data/z2.json", "--n-relevance", "2,3", "--json")
    doc = {v["property"]: v["holds"] for v in json.loads(out)["verdicts"]}
    assert doc["2-relevant"] == "No" and doc["3-relevant"] != "No"


def test_monoid_commands(capsys):
    code, out, _ = run(capsys, "monoid", "presentations/free-a.txt")
    assert code == 0 and "NonTrivial" in out
    code, out, _ = run(capsys, "monoid", "presentations/inverse-pair.txt", "--json")
    assert code == 0 and json.loads(out)["triviality"]["status"] == "Trivial"
    code, _, _ = run(capsys, "monoid", "presentations/free-a.txt", "--budget", "10", "--model-bound", "1")
    assert code == 3


def test_same_seed_same_bytes(capsys):
    argv = ["check", "dist", "theories/idempotent.theory", "--randomized", "--seed", "7", "--json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_jobs_from_environment(capsys, monkeypatch):
    argv = ["check", "powerset", "theories/idempotent.theory", "--json"]
    serial = run(capsys, *argv)[1]
    monkeypatch.setenv("MONADPRESERVE_JOBS", "2")
    assert run(capsys, *argv)[1] == serial
    monkeypatch.setenv("MONADPRESERVE_JOBS", "zero")
    assert run(capsys, *argv)[0] == 2


def test_reproduce_subset(capsys):
    code, out, _ = run(capsys, "reproduce", "--only", "3,6")
    assert code == 0 and "2/2 criteria passed" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "monadpreserve", "check", "maybe", "theories/idempotent.theory",
                           "--max-carrier", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "PreservedUpToBound" in proc.stdout
