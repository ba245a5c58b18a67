import io
import json
import subprocess
import sys

import pytest

from cjslab.cli import embedding_from_dict, load_structure, main, region_sets_from_json
from cjslab.clans import enumerate_abstract_points, enumerate_clans
from cjslab.decider import enumerate_structures
from cjslab.logic import eval_formula, parse_formula
from cjslab.representation import verify_embedding
from cjslab.standard import fixture_pr2nn, powerset_structure
from cjslab.structures import validate_structure


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pr2nn_file(tmp_path):
    p = tmp_path / "pr2nn.json"
    p.write_text(json.dumps(fixture_pr2nn().to_dict()))
    return str(p)


@pytest.fixture
def p12_file(tmp_path):
    p = tmp_path / "p12.json"
    p.write_text(json.dumps(powerset_structure([1, 2]).to_dict()))
    return str(p)


def test_example_piped_into_check(capsys, monkeypatch):
    code, out, _ = run(capsys, "example", "pr2nn")
    assert code == 0
    code, report, _ = run(capsys, "check", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    assert "CJS: yes" in report and "DCJS: no" in report
    assert "(ad): no  witness ({1,2}, {1,3}, {2,4})" in report


def test_check_json_and_require(capsys, pr2nn_file):
    code, out, _ = run(capsys, "check", pr2nn_file, "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["is_cjs"] and not d["is_dcjs"]
    assert d["ad_witness"] == ["{1,2}", "{1,3}", "{2,4}"]
    assert run(capsys, "check", pr2nn_file, "--require", "dcjs")[0] == 1
    assert run(capsys, "check", pr2nn_file, "--require", "cjs")[0] == 0


def test_decide_exit_codes(capsys):
    code, out, _ = run(capsys, "decide", "x C y -> y C x")
    assert code == 0 and out.strip() == "VALID"
    code, out, _ = run(capsys, "decide", "x <= y -> x C y", "--format", "json")
    d = json.loads(out)
    assert code == 1 and d["verdict"] == "invalid"
    cx = validate_structure(d["counterexample"])
    assert not eval_formula(cx, d["counterexample"]["valuation"], parse_formula("x <= y -> x C y"))
    code, _, err = run(capsys, "decide", "x + <= y")
    assert code == 2 and "offset 4" in err
    code, out, _ = run(capsys, "decide", "x C y", "--max-work", "0")
    assert code == 3 and out.startswith("INCONCLUSIVE")


def test_decide_dcjs_flag(capsys):
    code, out, _ = run(capsys, "decide", "x <= y -> x C y", "--dcjs", "--mode", "generated")
    assert code == 1 and out.startswith("INVALID")


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"elements": ["0"], "zero": "0", "one": "0"}')
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "field join" in err
    bad.write_text("{not json")
    assert run(capsys, "check", str(bad))[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "enumerate", "--size", "0")[0] == 2


def test_relational_on_non_dcjs_fails(capsys, pr2nn_file):
    code, _, err = run(capsys, "represent", pr2nn_file, "--mode", "relational")
    assert code == 1 and "not a DCJS" in err


@pytest.mark.parametrize("cmd, enum", [("clans", enumerate_clans), ("points", enumerate_abstract_points)])
def test_region_output_round_trip(capsys, p12_file, cmd, enum):
    code, out, _ = run(capsys, cmd, p12_file, "--format", "json")
    S = load_structure(p12_file)
    assert code == 0
    assert region_sets_from_json(S, json.loads(out)) == [
        type(r)(r.members, frozenset({r.kind})) for r in enum(S)]


@pytest.mark.parametrize("flags", [["--mode", "set"], ["--mode", "relational"],
                                   ["--mode", "relational", "--strategy", "prime-ideal"]])
def test_represent_round_trip(capsys, p12_file, flags):
    code, out, _ = run(capsys, "represent", p12_file, "--format", "json", *flags)
    d = json.loads(out)
    S = load_structure(p12_file)
    assert code == 0 and all(d["verified"].values())
    assert verify_embedding(S, embedding_from_dict(S, d)).ok


def test_enumerate_stream_and_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "--size", "5", "--kind", "dcjs")
    lines = out.splitlines()
    assert code == 0
    assert [validate_structure(json.loads(l)) for l in lines] == list(enumerate_structures(5, "dcjs"))
    code, out, _ = run(capsys, "enumerate", "--size", "5", "--kind", "dcjs", "--count-only", "--format", "json")
    assert json.loads(out)["total"] == len(lines)


@pytest.mark.parametrize("argv", [
    ["example", "powerset", "--points", "a,b,c"],
    ["example", "relational", "--points", "1,2,3", "--relation", "1-2"],
    ["example", "topology", "--points", "1,2", "--opens", "1"],
    ["example", "family", "--points", "1,2,3", "--family", "1;2,3"],
])
def test_examples_load_back(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    validate_structure(json.loads(out))


def test_topology_file(capsys, tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"points": [1, 2], "opens": [[], [1], [1, 2]]}))
    code, out, _ = run(capsys, "example", "topology", "--topology", str(p))
    assert code == 0 and json.loads(out)["elements"] == ["{}", "{1,2}"]


def test_output_is_deterministic(capsys, pr2nn_file):
    first = run(capsys, "represent", pr2nn_file, "--format", "json")[1]
    assert run(capsys, "represent", pr2nn_file, "--format", "json")[1] == first


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "cjslab.cli", "decide", "x C y -> y C x"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "VALID"
