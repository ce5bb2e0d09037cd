import json

import pytest

from fsts.cli import main

GOOD = """universe a b;
horizon 1;
fset A = [n1: {a: 1/2}, tail: {b: 1}];
topology T = generate(A);
query closure(T, A);
check axioms(T);
expect open(T, A) = true;
"""


@pytest.fixture
def model(tmp_path):
    def write(text, name="m.fsts"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def test_eval_ok(model, capsys):
    assert main(["eval", model(GOOD)]) == 0
    out = capsys.readouterr().out
    assert out.count("=> pass") == 2


def test_json_schema(model, capsys):
    assert main(["eval", model(GOOD), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    for r in doc["results"]:
        assert {"id", "span", "kind", "verdict"} <= set(r) <= {"id", "span", "kind", "verdict", "witness"}
        assert set(r["span"]) == {"line", "column", "start", "end"}
    assert [r["kind"] for r in doc["results"]] == ["query", "check", "expect"]


def test_text_and_json_agree(model, capsys):
    path = model(GOOD.replace("= true", "= false"))
    assert main(["eval", path]) == 1
    text = [line.rsplit("=> ", 1)[1] for line in capsys.readouterr().out.splitlines() if "=> " in line]
    main(["eval", path, "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert text == [r["verdict"] for r in doc["results"]]


def test_check_runs_only_assertions(model, capsys):
    assert main(["check", model(GOOD), "--format", "json"]) == 0
    assert [r["kind"] for r in json.loads(capsys.readouterr().out)["results"]] == ["check", "expect"]


@pytest.mark.parametrize("argv", [["eval"], ["frobnicate"], ["props", "--trials", "-1"], ["props", "--only", "nope"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_parse_error_exit(model, capsys):
    assert main(["eval", model("universe a;\nhorizon 1;\nfset A = X(;\n")]) == 2
    err = capsys.readouterr().err
    assert ":3:12: syntax error" in err


def test_missing_file(capsys):
    assert main(["eval", "/nonexistent/m.fsts"]) == 2


def test_props_json_is_deterministic(capsys):
    argv = ["props", "--trials", "10", "--seed", "7", "--only", "P2.6,T2.4", "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    assert json.loads(first)["failed"] == []


def test_props_reports_failure(capsys):
    assert main(["props", "--trials", "30", "--seed", "7", "--only", "T2.2", "--format", "json"]) == 1
    doc = json.loads(capsys.readouterr().out)
    (rep,) = doc["reports"]
    assert rep["verdicts"]["fails"] > 0 and "counterexample for T2.2" in rep["failures"][0]["model"]


def test_paper_and_list(capsys):
    assert main(["paper"]) == 1
    assert capsys.readouterr().out.strip().endswith("6/8 corpus PASS")
    assert main(["list", "--format", "json"]) == 0
    assert len(json.loads(capsys.readouterr().out)) > 50


def test_color_off_when_not_tty(model, capsys, monkeypatch):
    monkeypatch.setenv("FSTS_COLOR", "always")
    main(["eval", model(GOOD)])
    assert "\033[32m" in capsys.readouterr().out
    monkeypatch.setenv("FSTS_COLOR", "auto")
    main(["eval", model(GOOD)])
    assert "\033[" not in capsys.readouterr().out
