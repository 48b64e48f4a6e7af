import io
import json
import subprocess
import sys

import pytest

from magiclim.checks import Check
from magiclim.cli import main
from magiclim.report import Report, Table, emit_report
from magiclim.scenario import FIXTURES, ScenarioError, fixture, run_data

SMALL = {"classical-hopf": "classical-hopf:2", "classical-tower": "classical-tower:3", "natural-action": "natural-action:2", "classical-grid": "classical-grid:2"}


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def scenario_file(tmp_path):
    def write(data, name="s.json"):
        p = tmp_path / name
        p.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(p)

    return write


# -- report rendering -------------------------------------------------------


def test_empty_report():
    assert emit_report(Report(), "json") == '{"checks":[],"summary":{"pass":0,"fail":0}}'
    assert emit_report(Report()) == "summary: 0 passed, 0 failed"


def test_report_rendering():
    r = Report(
        "demo",
        [Check("a.ok", "fine", "x = x", True), Check("a.bad", "broken", "y = z", False, "(1, 0)")],
        [Table("sizes", (("n", "dim"), ("1", "24")))],
        ["a.bad is FAIL, expected PASS"],
    )
    text = emit_report(r)
    assert text.splitlines() == [
        "scenario: demo",
        "PASS  a.ok   x = x",
        "FAIL  a.bad  y = z  [(1, 0)]",
        "",
        "sizes",
        "  n  dim",
        "  1   24",
        "summary: 1 passed, 1 failed",
        "unexpected: a.bad is FAIL, expected PASS",
    ]
    d = json.loads(emit_report(r, "json"))
    assert list(d) == ["scenario", "checks", "summary", "tables", "unexpected"]
    assert d["checks"][1] == {"id": "a.bad", "description": "broken", "anchor": "y = z", "status": "FAIL", "witness": "(1, 0)"}
    assert "witness" not in d["checks"][0]
    with pytest.raises(ValueError):
        emit_report(r, "xml")


# -- fixtures ---------------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURES)
def test_every_fixture_meets_its_expectations(name, capsys):
    code, out, _ = run(["fixture", SMALL.get(name, name)], capsys)
    assert code == 0
    report = run_data(json.loads(out))
    assert report.unexpected == []


def test_unknown_fixture(capsys):
    code, _, err = run(["fixture", "nope"], capsys)
    assert code == 2 and "unknown fixture 'nope'" in err
    with pytest.raises(ScenarioError):
        fixture("perturbed-coproduct:3")


def test_perturbed_coproduct_fails_where_expected():
    checks = {c.id: c for c in run_data(fixture("perturbed-coproduct")).checks}
    assert not checks["coproduct.coassociativity"].passed
    assert checks["coproduct.homomorphism"].passed


# -- verify -----------------------------------------------------------------


def test_verify_file_and_stdin_agree(capsys, monkeypatch, scenario_file):
    data = fixture("classical-hopf:2")
    code_a, out_a, _ = run(["verify", scenario_file(data), "--format", "json"], capsys)
    code_b, out_b, _ = run(["verify", "-", "--format", "json"], capsys, json.dumps(data), monkeypatch)
    assert code_a == code_b == 0 and out_a == out_b
    assert json.loads(out_a)["summary"]["fail"] == 0


def test_unexpected_outcome_exits_1(capsys, scenario_file):
    data = fixture("classical-hopf:2") | {"expectations": [{"check": "coproduct.coassociativity", "expected": "FAIL"}]}
    code, out, _ = run(["verify", scenario_file(data)], capsys)
    assert code == 1
    assert "unexpected: coproduct.coassociativity is PASS, expected FAIL" in out


def test_expectation_matching_nothing_exits_1(capsys, scenario_file):
    data = fixture("classical-hopf:2") | {"expectations": [{"check": "no.such.check"}]}
    code, out, _ = run(["verify", scenario_file(data)], capsys)
    assert code == 1 and "matches no check" in out


def test_glob_expectations():
    # the first matching pattern wins
    data = fixture("paper-block-truncated") | {"expectations": [{"check": "magic.partial_sums"}, {"check": "magic.*_sums", "expected": "FAIL"}]}
    assert run_data(data).unexpected == []


def test_glob_brackets_are_literal():
    data = fixture("paper-block") | {"expectations": [{"check": "magic[0].pad.magic.?ow_sums", "expected": "FAIL"}, {"check": "magic[0].pad.magic.col_s*", "expected": "FAIL"}, {"check": "magic[1].magic.*"}]}
    assert run_data(data).unexpected == []
    data["expectations"].append({"check": "magic[01].magic.projections"})
    assert run_data(data).unexpected == ["expectation 'magic[01].magic.projections' matches no check"]


@pytest.mark.parametrize(
    "text, message",
    [
        ('{"name": "x",\n  "hopf": }', "line 2 column 11"),
        ('[1, 2]', "must be a JSON object"),
        ('{"bogus": 1}', "unknown key 'bogus'"),
        ('{"hopf": {"builtin": "classical:5"}}', "allow_large"),
        ('{"hopf": {"algebra": [1, 1], "coproduct": [[1, 0], [0, 1]]}}', "hopf.coproduct: expected a 4x2 matrix, got 2x2"),
        ('{"magic": [{"builtin": "classical:2"}, {"builtin": "wat:1"}]}', "magic[1]"),
        ('{"expectations": [{"check": "x", "expected": "MAYBE"}]}', "expectations[0]"),
        ('{"mode": "fuzzy"}', "mode"),
    ],
)
def test_input_errors_exit_2(text, message, capsys, scenario_file):
    code, out, err = run(["verify", scenario_file(text)], capsys)
    assert code == 2 and out == ""
    assert err.startswith("magiclim: error: ") and message in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run(["verify", str(tmp_path / "absent.json")], capsys)
    assert code == 2 and "cannot read" in err


# -- modes ------------------------------------------------------------------

DECIMAL = {"hopf": {"algebra": [1], "coproduct": [[1.0]], "counit": [[1]], "antipode": [[1]]}}


def test_decimal_literals_force_float(capsys, scenario_file):
    path = scenario_file(DECIMAL)
    code, out, _ = run(["verify", path], capsys)
    assert code == 0 and "FAIL" not in out
    code, _, err = run(["verify", path, "--mode", "exact"], capsys)
    assert code == 2 and "exact mode" in err


def test_mode_precedence(monkeypatch):
    from magiclim.scenario import resolve_mode

    monkeypatch.delenv("MAGICLIM_MODE", raising=False)
    assert resolve_mode({}).exact
    monkeypatch.setenv("MAGICLIM_MODE", "float")
    assert not resolve_mode({}).exact
    assert resolve_mode({"mode": "exact"}).exact
    assert not resolve_mode({"mode": "exact"}, mode="float").exact
    m = resolve_mode({"mode": {"float": 1e-6}})
    assert not m.exact and m.tol == 1e-6
    assert resolve_mode({"tol": 1e-6}, tol=1e-3).tol == 1e-3


def test_float_mode_gives_same_verdicts(capsys):
    data = fixture("classical-grid:3")
    exact = run_data(data)
    approx = run_data(data, mode="float", tol=1e-10)
    assert [(c.id, c.status) for c in exact.checks] == [(c.id, c.status) for c in approx.checks]


# -- determinism and jobs ---------------------------------------------------


def test_json_is_byte_identical_across_runs(capsys, scenario_file):
    path = scenario_file(fixture("paper-block"))
    outs = [run(["verify", path, "--format", "json"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_jobs_do_not_change_output(capsys, scenario_file):
    path = scenario_file(fixture("classical-tower:3"))
    serial = run(["verify", path, "--format", "json"], capsys)
    parallel = run(["verify", path, "--format", "json", "--jobs", "2"], capsys)
    assert serial == parallel and serial[0] == 0


# -- demo -------------------------------------------------------------------


@pytest.mark.parametrize("m, k, gadgets", [(2, 3, False), (3, 4, True), (3, 2, False), (3, 1, False), (3, 1, True)])
def test_demo(m, k, gadgets, capsys):
    argv = ["demo", "paper-block", "--m", str(m), "--K", str(k), "--format", "json"] + (["--gadgets"] if gadgets else [])
    code, out, _ = run(argv, capsys)
    assert code == 0
    checks = {c["id"]: c["status"] for c in json.loads(out)["checks"]}
    assert checks["magic.projections"] == "PASS"
    assert checks["magic.row_sums"] == ("PASS" if k == m + 1 else "FAIL")


def test_demo_rejects_bad_sizes(capsys):
    code, _, err = run(["demo", "paper-block", "--m", "3", "--K", "5"], capsys)
    assert code == 2 and "K" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "magiclim.cli", "fixture", "empty"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout) == {}
