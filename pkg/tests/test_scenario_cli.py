import csv
import io
import json
import math
import os
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithdeg.cli import main
from arithdeg.generate import inequality_suite, theorem_suite
from arithdeg.scenario import (
    CSV_HEADER,
    Scenario,
    ScenarioError,
    SuiteResult,
    dump_scenario,
    emit_outputs,
    load_suite,
    parse_scenario,
    run_scenario,
    run_suite,
    summary_document,
)

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"

MINIMAL = """
d: 1
k: 1
M: [[2]]
G: [[1]]
Q: [[0]]
P: [[1]]
density: dense_by_construction
"""


# --- parsing ---------------------------------------------------------------


def test_minimal_document():
    s = parse_scenario(MINIMAL)
    assert (s.d, s.k, s.n_max, s.tol, s.tail_window) == (1, 1, 80, 1e-9, 0.25)


@pytest.mark.parametrize(
    "edit, message",
    [
        (("G: [[1]]", "G: [[0]]"), "G not positive definite"),
        (("M: [[2]]", "M: [[0]]"), "M singular"),
        (("P: [[1]]", "P: [[1, 2]]"), "P: expected"),
        (("Q: [[0]]", "Q: [['x']]"), r"Q\[0\]\[0\]"),
        (("Q: [[0]]", "Q: [[0.5]]"), r"Q\[0\]\[0\]"),
        (("M: [[2]]", "M: [['1/2']]"), "M: entries must be integers"),
        (("d: 1", "d: 2"), "d: declared"),
        (("density: dense_by_construction", "density: maybe"), "density"),
        (("k: 1", "colour: red"), "unknown field"),
    ],
)
def test_parse_errors_name_the_field(edit, message):
    with pytest.raises(ScenarioError, match=message):
        parse_scenario(MINIMAL.replace(*edit))


def test_singular_two_by_two():
    doc = "M: [[1, 1], [1, 1]]\nG: [[1]]\nQ: [[0], [0]]\nP: [[1], [0]]\n"
    with pytest.raises(ScenarioError, match="M singular"):
        parse_scenario(doc)


def test_missing_field_and_bad_yaml():
    with pytest.raises(ScenarioError, match="P: missing"):
        parse_scenario("M: [[2]]\nG: [[1]]\nQ: [[0]]\n")
    with pytest.raises(ScenarioError, match="YAML"):
        parse_scenario("M: [[2]\n")
    with pytest.raises(ScenarioError):
        parse_scenario("- 1\n- 2\n")


def test_round_trip_canonical_files():
    for path in sorted(SCENARIOS.glob("*.yaml")):
        s = parse_scenario(path.read_text())
        assert parse_scenario(dump_scenario(s)) == s


@given(st.integers(0, 10**6))
def test_round_trip_generated(seed):
    for s in theorem_suite(2, seed=seed):
        assert parse_scenario(dump_scenario(s)) == s


# --- running ---------------------------------------------------------------


def test_run_doubling():
    rep = run_scenario(parse_scenario(MINIMAL))
    assert rep.delta.lower == rep.delta.upper == 4
    assert rep.alpha.value == pytest.approx(4, abs=1e-12)
    assert rep.gap <= 1e-6


def test_run_unipotent():
    s = parse_scenario((SCENARIOS / "unipotent_translation.yaml").read_text())
    rep = run_scenario(s)
    assert rep.alpha.value == 1 and rep.alpha.mode == "polynomial" and rep.alpha.poly_degree_fit == 2


def test_non_dense_flag():
    rep = run_scenario(parse_scenario(MINIMAL.replace("dense_by_construction", "non_dense")))
    assert rep.verdict == "inequality-only"


def test_run_is_deterministic():
    s = parse_scenario((SCENARIOS / "fibonacci.yaml").read_text())
    a = json.dumps(summary_document(run_suite([s])))
    b = json.dumps(summary_document(run_suite([s])))
    assert a == b


def test_parallel_matches_serial():
    scen = inequality_suite(8, seed=3)
    serial = json.dumps(summary_document(run_suite(scen, jobs=1)))
    parallel = json.dumps(summary_document(run_suite(scen, jobs=3)))
    assert serial == parallel


# --- outputs ---------------------------------------------------------------


def test_csv_rows_for_doubling(tmp_path):
    s = parse_scenario(MINIMAL)
    out = emit_outputs(run_suite([s]), ["csv"], tmp_path)
    rows = list(csv.reader(open(out / "scenario_heights.csv")))
    assert tuple(rows[0]) == CSV_HEADER
    n, digits, logh, run = rows[4]
    assert (int(n), int(digits)) == (3, 2)  # h_3 = 64
    assert float(logh) == pytest.approx(3 * math.log(4), rel=1e-11)
    assert float(run) == pytest.approx(4, rel=1e-11)
    assert len(rows) == 82


def test_summary_contains_certificates(tmp_path):
    doc = "name: mixed\nM: [[2,1,0],[1,1,0],[0,0,1]]\nG: [[1]]\nQ: [[1],[0],[1]]\nP: [[0],[1],[1]]\n"
    out = emit_outputs(run_suite([parse_scenario(doc)]), ["summary"], tmp_path)
    summary = json.loads((out / "summary.json").read_text())
    rep = summary["reports"]["mixed"]
    assert rep["certificates"]["bezout"] == {"f1": [-1, 1], "f2": [1, -3, 1], "g1": [2, -1], "g2": [1], "rho": -1}
    assert rep["certificates"]["split"] == {"r": 1, "f2": [1, -3, 1]}
    assert set(rep["delta"]) >= {"lower", "upper", "value"}
    assert not (out / "mixed.txt").exists()


def test_empty_suite(tmp_path):
    out = emit_outputs(SuiteResult([]), out_dir=tmp_path)
    assert json.loads((out / "summary.json").read_text())["n_scenarios"] == 0
    assert SuiteResult([]).exit_code == 0


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        emit_outputs(SuiteResult([]), out_dir=blocker / "sub")


def test_env_var_sets_default_out(tmp_path, monkeypatch):
    monkeypatch.setenv("ARITHDEG_OUT", str(tmp_path / "envout"))
    out = emit_outputs(SuiteResult([]))
    assert out == tmp_path / "envout" and (out / "summary.json").exists()


# --- CLI -------------------------------------------------------------------


def run_cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_cli_suite_canonical(tmp_path):
    code, text = run_cli("suite", str(SCENARIOS), "--out", str(tmp_path))
    assert code == 0 and "3/3 passed" in text
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "summary.json" in names and "doubling_heights.csv" in names and "fibonacci.txt" in names


def test_cli_summary_byte_identical(tmp_path):
    run_cli("suite", str(SCENARIOS), "--out", str(tmp_path / "a"), "--format", "summary")
    run_cli("suite", str(SCENARIOS), "--out", str(tmp_path / "b"), "--format", "summary", "--jobs", "2")
    assert (tmp_path / "a" / "summary.json").read_bytes() == (tmp_path / "b" / "summary.json").read_bytes()


def test_cli_degree_orbit_decompose():
    code, text = run_cli("degree", str(SCENARIOS / "fibonacci.yaml"))
    assert code == 0 and text.startswith("delta  6.85410196625")
    code, text = run_cli("orbit", str(SCENARIOS / "doubling.yaml"), "--n-max", "10")
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 12
    code, text = run_cli("decompose", str(SCENARIOS / "fibonacci.yaml"))
    assert code == 0 and "X^2 - 3X + 1" in text


def test_cli_failure_exit_code(tmp_path):
    # a fixed point flagged dense: equality fails and the exit code says so
    bad = tmp_path / "bad.yaml"
    bad.write_text(MINIMAL.replace("P: [[1]]", "P: [[0]]").replace("d: 1", "name: stuck\nd: 1"))
    code, text = run_cli("verify", str(bad), "--out", str(tmp_path / "o"))
    assert code == 1 and "FAIL" in text
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert summary["failures"] == ["stuck"]


def test_cli_input_errors(tmp_path, capsys):
    assert run_cli("degree", str(tmp_path / "missing.yaml"))[0] == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text(MINIMAL.replace("G: [[1]]", "G: [[0]]"))
    assert run_cli("verify", str(bad), "--out", str(tmp_path))[0] == 2
    assert "G not positive definite" in capsys.readouterr().err
    assert run_cli("suite", str(tmp_path / "nodir"))[0] == 2


def test_cli_overrides(tmp_path):
    code, _ = run_cli("verify", str(SCENARIOS / "doubling.yaml"), "--n-max", "40", "--tol", "1e-8",
                      "--tail-window", "0.5", "--out", str(tmp_path), "--format", "summary")
    assert code == 0
    opts = json.loads((tmp_path / "summary.json").read_text())["reports"]["doubling"]["scenario"]["options"]
    assert opts == {"n_max": 40, "tol": 1e-8, "tail_window": 0.5}


def test_load_suite_orders_by_name():
    names = [s.name for s in load_suite(SCENARIOS)]
    assert names == sorted(names) == ["doubling", "fibonacci", "unipotent_translation"]
