"""End-to-end CLI tests; the binary path comes from the VSCP_CLI env var."""

import json
import os
import subprocess

import pytest

import vscp

CLI = os.environ.get("VSCP_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="VSCP_CLI not set")

HANDOFF = "T1: w x 1\nT1: w x 2\nT1: r y 1\nT2: r x 2\nT2: w y 1\nT3: r x 1\n"


def run(*args, **kw):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kw)


@pytest.fixture()
def trace(tmp_path):
    path = tmp_path / "handoff.trace"
    path.write_text(HANDOFF)
    return str(path)


def test_check_exit_codes(trace):
    assert run("check", trace, "--pi", "2").returncode == 0
    assert run("check", trace, "--pi", "1").returncode == 1
    assert run("check", trace, "--pi", "-1").returncode == 2
    assert run("check", "/nonexistent.trace", "--pi", "0").returncode == 2


def test_check_json_witness_revalidates(trace):
    r = run("check", trace, "--pi", "2", "--json")
    assert r.returncode == 0
    verdict = json.loads(r.stdout)
    assert verdict["consistent"] is True
    assert verdict["preemptions"] <= 2
    assert verdict["solver"] == "onewriter"

    p = vscp.parse_program(HANDOFF)
    order = [(t, i) for t, i in verdict["order"]]
    assert vscp.validate_interleaving(p, order, require_complete=True) is None
    assert vscp.is_sequentially_consistent(p, order)
    assert vscp.count_preemptions(p, order) == verdict["preemptions"]


def test_check_modes_agree(trace):
    for mode in ("auto", "onewriter", "exact", "oracle"):
        r = run("check", trace, "--pi", "2", "--mode", mode, "--json")
        assert r.returncode == 0, (mode, r.stderr)
        assert json.loads(r.stdout)["consistent"] is True


def test_onewriter_mode_rejects_multi_writer(tmp_path):
    path = tmp_path / "two.trace"
    path.write_text("T1: w x 1\nT2: w x 2\n")
    r = run("check", str(path), "--pi", "0", "--mode", "onewriter")
    assert r.returncode == 2
    assert "writer" in r.stderr.lower()


def test_budget_exit_code(trace):
    r = run("check", trace, "--pi", "2", "--mode", "exact", "--budget", "1")
    assert r.returncode == 3


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.trace"
    path.write_text("T1: w x 1\nT1: q x 1\n")
    r = run("check", str(path), "--pi", "0")
    assert r.returncode == 2
    assert "line 2" in r.stderr


def test_classify_output(trace):
    r = run("classify", trace)
    assert r.returncode == 0
    assert "1-Writer" in r.stdout
    assert "threads: 3" in r.stdout


def test_gen_sat3w_roundtrip(tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 1 1\n1 1 1 0\n")
    out = tmp_path / "f.trace"
    r = run("gen", "sat3w", "--cnf", str(cnf), "--out", str(out))
    assert r.returncode == 0, r.stderr

    sidecar = json.loads((tmp_path / "f.trace.roles.json").read_text())
    assert sidecar["pi"] == 0
    assert "fin" in sidecar["roles"]

    p = vscp.parse_program(out.read_text())
    assert p.thread_count == 7
    assert run("check", str(out), "--pi", "0", "--mode", "exact").returncode == 0


def test_gen_indep_roundtrip(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("3\n1 2\n2 3\n")
    out = tmp_path / "g.trace"
    r = run("gen", "indep", "--graph", str(graph), "-k", "2", "--out", str(out))
    assert r.returncode == 0, r.stderr
    sidecar = json.loads((tmp_path / "g.trace.roles.json").read_text())
    assert sidecar["pi"] == 6

    # {1, 3} is independent, so the generated trace is consistent at pi = 6
    assert run("check", str(out), "--pi", "6", "--mode", "exact").returncode == 0

    # a triangle has no independent pair, so its trace stays inconsistent
    graph.write_text("3\n1 2\n2 3\n1 3\n")
    r = run("gen", "indep", "--graph", str(graph), "-k", "2", "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert run("check", str(out), "--pi", "6", "--mode", "exact").returncode == 1


def test_usage_error():
    assert run("check").returncode == 2
    assert run().returncode == 2
