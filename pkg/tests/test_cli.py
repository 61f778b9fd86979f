"""CLI surface: JSON outputs, error handling, exit codes."""

import json

from click.testing import CliRunner

from specmut.cli import main


def _run(*args):
    return CliRunner().invoke(main, args)


def test_family_command():
    res = _run("family", "4", "6")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["symmetrizer"] == [1, 4, 1, 6]
    assert data["divisibility_ok"] is True
    assert data["strongly_primitive_proxy"] is False
    assert data["matrix"]["rows"][0] == [0, -4, 0, 6]


def test_realize_family():
    res = _run("realize", "--family", "4,6")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["verification"]["ok"] is True
    assert data["species"]["degrees"] == [1, 4, 1, 6]


def test_realize_dot():
    res = _run("realize", "--family", "4,6", "--dot")
    assert res.exit_code == 0
    assert res.output.startswith("digraph")


def test_matrix_and_family_are_exclusive():
    res = _run("realize", "--family", "4,6", "--matrix", "[[0,1],[-1,0]]")
    assert res.exit_code == 2
    res = _run("realize")
    assert res.exit_code == 2


def test_rejects_non_symmetrizable_matrix():
    res = _run("realize", "--matrix", "[[0, 1], [1, 0]]")
    assert res.exit_code == 1
    assert "not skew-symmetrizable" in res.output


def test_mutate_sequence_reports_steps():
    res = _run("mutate", "--family", "4,6", "--sequence", "1,2", "--seed", "0")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["ok"] is True
    assert [s["vertex"] for s in data["steps"]] == [1, 2]
    assert all(s["matches_matrix_mutation"] for s in data["steps"])


def test_check_command():
    res = _run("check", "--family", "4,6", "--seed", "0")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["verification"]["ok"] is True
    assert data["potential_terms_by_degree"]


def test_search_small_quiver_exit_codes():
    rows = json.dumps([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    res = _run("search", "--matrix", rows, "--max-len", "2", "--trials", "3")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["found"] is True
    assert data["max_len"] == 2
