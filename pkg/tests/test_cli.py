import json
from pathlib import Path

import pytest

from twistco import cli, specfile
from twistco.errors import ParseError, ValidationError

SPECS = sorted((Path(__file__).parent.parent / "specs").glob("*.json"))


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="spec.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def small_spec(**extra):
    doc = {
        "format": "twistco-spec",
        "version": 1,
        "field": "GF(2)",
        "objects": {"C": {"zoo": "kC2"}},
        "twists": {"tau": {"on": ["C", "C"], "flip": True}},
        "tasks": [{"name": "flip octagon", "check": "octagon", "twist": "tau"}],
    }
    doc.update(extra)
    return doc


@pytest.mark.parametrize("path", SPECS, ids=lambda p: p.name)
def test_shipped_specs_pass(path, capsys):
    code, out, _ = run(["verify", str(path), "--no-timing"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["format"] == "twistco-report"
    assert report["summary"]["fail"] == 0 and report["summary"]["error"] == 0


@pytest.mark.parametrize("path", SPECS, ids=lambda p: p.name)
def test_reports_are_byte_stable(path, capsys):
    _, first, _ = run(["verify", str(path), "--no-timing"], capsys)
    _, second, _ = run(["verify", str(path), "--no-timing"], capsys)
    assert first == second


def test_failure_exit_code(tmp_path, capsys):
    spec = small_spec(tasks=[{"name": "flip not conormal?", "check": "conormal", "twist": "tau", "expect": "fail"}])
    code, out, _ = run(["verify", write(tmp_path, spec)], capsys)
    assert code == 1
    assert json.loads(out)["tasks"][0]["verdict"] == "fail"


def test_parse_error_reports_position(tmp_path, capsys):
    code, _, err = run(["verify", write(tmp_path, '{\n  "format": ,\n}')], capsys)
    assert code == 2
    assert "line 2" in err
    with pytest.raises(ParseError) as info:
        specfile.parse_spec('{\n  "format": ,\n}')
    assert info.value.line == 2


def test_unknown_reference(tmp_path, capsys):
    spec = small_spec(tasks=[{"name": "x", "check": "octagon", "twist": "missing"}])
    code, _, err = run(["verify", write(tmp_path, spec)], capsys)
    assert code == 2 and "missing" in err


def test_bad_format_tag():
    with pytest.raises(ValidationError):
        specfile.parse_spec(json.dumps(small_spec(format="other")))


def test_subcommand_filters_tasks(tmp_path, capsys):
    code, out, _ = run(["alg", "verify", write(tmp_path, small_spec()), "--no-timing"], capsys)
    assert code == 0 and json.loads(out)["tasks"] == []


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(["verify", write(tmp_path, small_spec()), "-o", str(target), "--no-timing"], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["summary"]["pass"] == 1


def test_zoo_list(capsys):
    code, out, _ = run(["zoo", "list"], capsys)
    assert code == 0 and "H4" in out and "k^S3" in out


@pytest.mark.parametrize("name, field", [("H4", "3"), ("kS3", "Q"), ("Mc2", "5"), ("k^C3", "Q")])
def test_zoo_export_round_trip(name, field, tmp_path, capsys):
    target = tmp_path / "exported.json"
    assert run(["zoo", "export", name, "--field", field, "-o", str(target)], capsys)[0] == 0
    code, out, _ = run(["verify", str(target), "--no-timing"], capsys)
    assert code == 0


def test_zoo_export_unknown(capsys):
    assert run(["zoo", "export", "nope"], capsys)[0] == 2


def test_search_jsonl(capsys):
    code, out, err = run(["search", "--dims", "2", "2", "--require", "octagon,tw"], capsys)
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 16 and all(x["in_tw"] for x in lines)
    assert "16 solutions" in err


def test_search_budget_exit(capsys):
    code, _, err = run(["search", "--dims", "3", "2"], capsys)
    assert code == 2 and "budget" in err


def test_search_rational_rejected(capsys):
    assert run(["search", "--field", "Q"], capsys)[0] == 2
