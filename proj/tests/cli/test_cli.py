import csv
import json
import math
import os
import subprocess

import jsonschema
import pytest

MMS_LAB = os.environ.get("MMS_LAB", "mms-lab")
SCHEMA_PATH = os.environ.get("MMS_LAB_SCHEMA")


def run(*args, cwd):
    return subprocess.run([MMS_LAB, *args], cwd=cwd, capture_output=True, text=True, timeout=300)


@pytest.fixture(scope="module")
def schema():
    if not SCHEMA_PATH:
        pytest.skip("MMS_LAB_SCHEMA not set")
    with open(SCHEMA_PATH) as f:
        return json.load(f)


@pytest.fixture(scope="module")
def work(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    two = {"dist": [[0, 1], [1, 0]], "weights": [1, 1]}
    (d / "two.json").write_text(json.dumps(two))
    pitch = math.pi / 200
    r = run("space", "gen", "--kind", "segment", "--pitch", repr(pitch), "--out", "seg.json", cwd=d)
    assert r.returncode == 0, r.stderr
    r = run("space", "gen", "--kind", "earring", "--n", "3", "--res", "16", "--out", "h3.json", cwd=d)
    assert r.returncode == 0, r.stderr
    return d


def test_forced_transport_instance(work, schema):
    r = run("ot", "solve", "--space", "two.json", "--mu0", "0", "--mu1", "0:0.5,1:0.5", cwd=work)
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    jsonschema.validate(report, schema)
    assert report["command"] == "ot solve"
    assert abs(report["results"]["cost"] - 0.5) < 1e-12


def test_reports_validate_against_schema(work, schema):
    commands = [
        ["space", "validate", "--space", "seg.json"],
        ["mcp", "scalar-bound", "--t-grid", "200", "--d-grid", "200"],
        ["iso", "enum", "--space", "h3.json"],
        ["iso", "escape", "--count", "20"],
        ["ot", "selfcheck", "--count", "20"],
        ["gh", "scan", "--space", "seg.json", "--x", "50", "--eps", "0.1", "--delta", "0.4"],
    ]
    for args in commands:
        r = run(*args, cwd=work)
        assert r.returncode == 0, (args, r.stdout, r.stderr)
        jsonschema.validate(json.loads(r.stdout), schema)


def test_scalar_bound_holds(work):
    r = run("mcp", "scalar-bound", cwd=work)
    assert r.returncode == 0, r.stderr
    results = json.loads(r.stdout)["results"]
    assert results["holds"] is True
    assert results["min_margin"] >= -1e-12


def test_seeded_runs_are_byte_identical(work):
    args = ["--seed", "11", "ot", "selfcheck", "--count", "30"]
    first = run(*args, cwd=work)
    second = run(*args, cwd=work)
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["inputs"]["seed"] == 11


def test_report_file_matches_stdout_format(work, schema):
    r = run("--report", "rep.json", "iso", "enum", "--space", "h3.json", cwd=work)
    assert r.returncode == 0, r.stderr
    report = json.loads((work / "rep.json").read_text())
    jsonschema.validate(report, schema)
    assert report["results"]["count"] == 8


def test_mcp_csv_columns(work):
    r = run("--csv", "mcp.csv", "mcp", "verify", "--space", "seg.json", "--x", "0",
            "--A", "x>=0.7853981633974483", cwd=work)
    assert r.returncode == 0, r.stderr
    with open(work / "mcp.csv") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["t", "cell", "lhs", "rhs", "slack"]
    assert len(rows) > 1
    for row in rows[1:50]:
        lhs, rhs, slack = map(float, row[2:])
        assert abs(slack - (rhs - lhs)) < 1e-9


def test_unknown_verb_is_a_usage_error(work, schema):
    r = run("space", "frobnicate", cwd=work)
    assert r.returncode == 1
    report = json.loads(r.stdout)
    jsonschema.validate(report, schema)
    assert report["error"]["code"] == "usage"


def test_missing_file_is_an_io_error(work, schema):
    r = run("space", "validate", "--space", "nope.json", cwd=work)
    assert r.returncode == 1
    report = json.loads(r.stdout)
    jsonschema.validate(report, schema)
    assert report["error"]["code"] == "io"


def test_strict_exits_2_on_inconclusive(work):
    args = ["gh", "scan", "--space", "seg.json", "--x", "48", "--eps", "0.02", "--delta", "0.4"]
    relaxed = run(*args, cwd=work)
    assert relaxed.returncode == 0, relaxed.stderr
    assert json.loads(relaxed.stdout)["inconclusive"] is True
    strict = run("--strict", *args, cwd=work)
    assert strict.returncode == 2
