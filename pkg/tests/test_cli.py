import json

import pytest

from main_cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_datasets(capsys):
    code, out = run(capsys, "datasets", "--format", "json")
    assert code == 0
    assert {row["name"] for row in json.loads(out.out)} == {"kcbs5", "yuoh13", "twin10"}


def test_inspect_and_schema(capsys):
    code, out = run(capsys, "inspect", "yuoh13", "--format", "json")
    assert code == 0
    assert json.loads(out.out)["n"] == 13
    code, out = run(capsys, "inspect", "--schema")
    assert code == 0
    assert "normalization" in json.loads(out.out)["properties"]


def test_invariants(capsys):
    code, out = run(capsys, "invariant", "alpha", "johnson(5,2)", "--format", "json")
    assert code == 0
    assert json.loads(out.out)["value"] == "2"
    code, out = run(capsys, "invariant", "chif", "johnson(7,2)", "--delete", "0,20", "--format", "json")
    assert code == 0
    assert json.loads(out.out)["value"] == "19/3"


def test_graph_command(capsys):
    code, out = run(capsys, "graph", "kcbs5", "--format", "json")
    assert code == 0
    assert json.loads(out.out)["edges"] == [[0, 1], [0, 4], [1, 2], [2, 3], [3, 4]]


def test_ks_check(capsys):
    code, _ = run(capsys, "ks", "check", "yuoh13")
    assert code == 1


def test_certify_exit_codes(capsys):
    assert run(capsys, "certify", "kcbs5")[0] == 1
    assert run(capsys, "certify", "yuoh13", "--weights", "3,3,2,3,3,3,2,3,3,3,3,2,2")[0] == 0


def test_bounds_and_values(capsys):
    weights = "3,3,2,3,3,3,2,3,3,3,3,2,2"
    code, out = run(capsys, "bound", "nchv", "yuoh13", "--weights", weights, "--format", "json")
    assert code == 0
    assert json.loads(out.out)["value"] == "11"
    code, out = run(capsys, "value", "bell", "yuoh13", "--weights", weights, "--format", "json")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["violated"] and payload["bound"] == "11"
    assert payload["value"] == pytest.approx(35 / 3)


def test_value_at_a_given_state(capsys):
    code, out = run(capsys, "value", "nc", "kcbs5", "--weights", "1,1,1,1,1", "--state", "1/sqrt(3),1/sqrt(3),1/sqrt(3)", "--format", "json")
    assert code == 0
    assert json.loads(out.out)["value"] == pytest.approx(2 + 1 / 9)


def test_errors_map_to_exit_codes(capsys):
    code, out = run(capsys, "inspect", "nope")
    assert code == 3
    assert "UnknownDataset" in out.err
    code, _ = run(capsys, "bound", "nchv", "yuoh13", "--weights", "1,2")
    assert code == 3


def test_tifs_build(capsys, tmp_path):
    target = tmp_path / "bug.json"
    code, _ = run(capsys, "tifs", "build", "--a", "0,0,1", "--b", "sqrt(15)/4,0,1/4", "--kind", "bug", "--output", str(target))
    assert code == 0
    assert target.exists()
    code, _ = run(capsys, "tifs", "verify", str(target), "--a", "0", "--b", "4")
    assert code == 0
