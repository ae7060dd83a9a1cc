import csv
import io
import json

import pytest

from mirabolic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_dims(capsys):
    code, out = run(capsys, "dims", "--n", "2", "--d", "2")
    assert code == 0
    data = json.loads(out)
    assert data["mv"] == 13 and data["xi"] == 27 and data["xi1"] == 13


def test_hecke_relations_exit_zero(capsys):
    code, out = run(capsys, "relations", "--suite", "hecke", "--d", "3")
    assert code == 0 and json.loads(out)["passed"]


def test_schur_relations_report_the_failing_family(capsys):
    code, out = run(capsys, "relations", "--suite", "schur", "--n", "2", "--d", "1")
    assert code == 1
    rels = {r["relation"]: r["passed"] for r in json.loads(out)["relations"]}
    assert not rels["m"] and rels["m*"]


def test_mul_with_empty_word_echoes_the_element(capsys):
    code, out = run(capsys, "mul", "--element", "[1 1; 0 2]{(1,2)}")
    data = json.loads(out)
    assert code == 0 and data["text"].count("[") >= 1
    assert len(data["result"]["terms"]) == 1


def test_bad_generator_is_a_usage_error(capsys):
    assert main(["mul", "--word", "X9", "--element", "[1 1; 0 2]"]) == 2


def test_budget_exit_code(capsys):
    assert main(["oracle", "verify", "--n", "2", "--d", "2", "--q", "2", "--budget", "1", "--jobs", "1"]) == 3


def test_output_is_deterministic(capsys):
    argv = ["oracle", "verify", "--n", "2", "--d", "2", "--q", "2", "--sample", "10", "--seed", "4", "--jobs", "1"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b and json.loads(a)["passed"]


def test_census_csv(capsys):
    code, out = run(capsys, "oracle", "census", "--n", "2", "--d", "2", "--q", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["n", "d", "q", "matrix", "delta", "class_size"]
    assert len(rows) == 28


def test_interp_agrees_with_the_formula(capsys):
    code, out = run(capsys, "interp", "--left", "[1 0; 0 1]{(1,1)}", "--right", "[0 1; 1 0]",
                    "--target", "[0 1; 1 0]{(1,2)}", "--primes", "2", "3", "5")
    assert code == 0 and json.loads(out)["agrees"]


def test_stabilize(capsys):
    code, out = run(capsys, "stabilize", "--word", "[3 0 0; 0 3 0; 0 0 2]{(1,1)}", "[2 1 0; 1 1 1; 0 1 1]")
    data = json.loads(out)
    assert code == 0 and data["agrees_with_k_mul"]


def test_duality(capsys):
    code, out = run(capsys, "duality", "--n", "2", "--d", "2")
    assert code == 0 and json.loads(out)["dim_S"] == 27


def test_out_file(tmp_path, capsys):
    target = tmp_path / "dims.json"
    assert main(["dims", "--n", "1", "--d", "1", "--out", str(target)]) == 0
    assert json.loads(target.read_text())["mv"] == 2
