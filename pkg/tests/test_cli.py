import csv
import io
import json

import pytest

from xshuffle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mult(capsys):
    assert run(capsys, "mult", "(4 3)(2 1)", "--n", "4", "--method", "both")[:2] == (0, "15, 15\n")
    assert run(capsys, "mult", "", "--n", "5")[1] == "26\n"
    assert run(capsys, "mult", "(3 2 1)", "--n", "3")[1] == "5\n"
    code, out, _ = run(capsys, "mult", "(2 1)", "--n", "3", "--format", "json", "--method", "both")
    assert json.loads(out) == {"permutation": "(2 1)", "n": 3, "structured": "5", "oracle": "5"}


def test_most_likely(capsys):
    assert run(capsys, "most-likely", "4")[1] == "(4 3)(2 1)  15\n"
    code, out, _ = run(capsys, "most-likely", "18", "--format", "json")
    data = json.loads(out)
    assert data["winners"] == ["()"] and data["maxValue"] == "997313824"
    lines = run(capsys, "most-likely", "2")[1].splitlines()
    assert sorted(lines) == ["()  2", "(2 1)  2"]
    code, out, _ = run(capsys, "most-likely", "6", "--full-table")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11 and rows[0]["isGlobalWinner"] == "true"


def test_fixed_points(capsys):
    assert run(capsys, "fixed-points", "--n", "2", "--mode", "uniform", "--method", "egf")[1] == "0  1/2\n2  1/2\n"
    code, out, _ = run(capsys, "fixed-points", "--n", "4", "--method", "oracle", "--format", "json")
    exact = json.loads(out)
    assert json.loads(run(capsys, "fixed-points", "--n", "4", "--format", "json")[1]) == exact
    out = run(capsys, "fixed-points", "--method", "limit", "--mode", "uniform", "--k-max", "3")[1]
    assert out.splitlines()[0].startswith("0  0.43661")
    assert len(out.splitlines()) == 4
    out = run(capsys, "fixed-points", "--method", "limit", "--mode", "permutation", "--format", "csv")[1]
    assert out.splitlines()[0] == "k,p" and out.splitlines()[1].startswith("0,0.14419")


def test_table_is_thread_independent(capsys):
    one = run(capsys, "table", "--n", "4", "--format", "json", "--threads", "1")[1]
    four = run(capsys, "table", "--n", "4", "--format", "json", "--threads", "4")[1]
    assert one == four
    rows = json.loads(one)
    assert sum(int(r["count"]) for r in rows) == 256


def test_env_thread_default(capsys, monkeypatch):
    monkeypatch.setenv("XSHUFFLE_THREADS", "3")
    assert run(capsys, "table", "--n", "3")[0] == 0


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "series")
    assert code == 0 and all(line.startswith("PASS") for line in out.splitlines())


@pytest.mark.parametrize("argv, code", [
    (["bogus"], 1),
    (["mult", "(1 2"], 1),
    (["mult", "(2 1)", "--cap", "0"], 1),
    (["mult", "(1 1)"], 1),
    (["fixed-points", "--method", "egf"], 1),
    (["mult", "(9 8 7 6 5 4 3 2 1)", "--method", "oracle"], 2),
    (["mult", "(9 8 7 6 5 4 3 2 1)"], 2),
    (["most-likely", "41"], 2),
    (["table", "--n", "8"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_method_disagreement_exit_code(capsys, monkeypatch):
    from xshuffle import counting
    monkeypatch.setattr(counting, "n_structured", lambda p, cap=None: -1)
    assert run(capsys, "mult", "(2 1)", "--method", "both")[0] == 3
