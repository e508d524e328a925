import json
import subprocess
import sys

import pytest

from roothk.cli import main

CLI = [sys.executable, "-m", "roothk.cli"]


def run_cli(args, env_extra=None):
    import os

    env = dict(os.environ)
    env.pop("ROOTHK_GROUP_CAP", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CLI + args, capture_output=True, text=True, env=env)


def test_analyze_json_pass(capsys):
    code = main(["analyze", "A", "2", "--lattice", "dual", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["tool_version"]
    names = [c["name"] for c in doc["checks"]]
    assert "analyze/A2/irreducible" in names
    model = next(c for c in doc["checks"] if c["name"] == "analyze/A2/known-model")
    assert model["values"]["lattice"] == "A2*"
    assert "Kummer" in model["values"]["model"]


def test_analyze_invalid_rank_exit_2():
    proc = run_cli(["analyze", "A", "0"])
    assert proc.returncode == 2
    assert "error" in proc.stderr


def test_analyze_unknown_family_exit_2():
    proc = run_cli(["analyze", "X", "2"])
    assert proc.returncode == 2


def test_unknown_suite_exit_2():
    proc = run_cli(["report", "--suite", "exotic"])
    assert proc.returncode == 2


def test_bad_lattice_selector_exit_2():
    proc = run_cli(["analyze", "A", "2", "--lattice", "weights"])
    assert proc.returncode == 2


def test_sublattices_b2_needs_rank_3():
    proc = run_cli(["sublattices", "B", "2"])
    assert proc.returncode == 2
    assert "rank >= 3" in proc.stderr


def test_lemma_check_exit_0_and_rows(capsys):
    code = main(["lemma-check", "--max-rank", "2", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    names = [c["name"] for c in doc["checks"]]
    assert names == ["lemma/A1", "lemma/A2", "lemma/B2", "lemma/C2", "lemma/G2"]
    for c in doc["checks"]:
        assert c["values"] == {
            "sym2_inv": 1,
            "wedge2_inv": 0,
            "wedge2_doubled_inv": 1,
            "irreducible": 1,
        }


def test_lemma_check_max_rank_one_is_only_a1(capsys):
    code = main(["lemma-check", "--max-rank", "1", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert [c["name"] for c in doc["checks"]] == ["lemma/A1"]


def test_json_tsv_value_parity(capsys):
    code_j = main(["sublattices", "A", "3", "--format", "json"])
    out_j = capsys.readouterr().out
    code_t = main(["sublattices", "A", "3", "--format", "tsv"])
    out_t = capsys.readouterr().out
    assert code_j == code_t == 0
    doc = json.loads(out_j)
    lines = out_t.rstrip("\n").split("\n")[1:]
    assert len(lines) == len(doc["checks"])
    for check, line in zip(doc["checks"], lines):
        name, status, values, citation = line.split("\t")
        assert name == check["name"]
        assert status == check["status"]
        rendered = ";".join(f"{k}={v}" for k, v in check["values"].items())
        assert values == rendered


def test_group_cap_env_var_respected():
    proc = run_cli(["analyze", "A", "3", "--format", "json"], env_extra={"ROOTHK_GROUP_CAP": "5"})
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    freeness = next(c for c in doc["checks"] if c["name"].endswith("freeness-codim"))
    assert freeness["status"] == "skipped"


def test_group_cap_flag_wins_over_env():
    proc = run_cli(
        ["analyze", "A", "3", "--group-cap", "100", "--format", "json"],
        env_extra={"ROOTHK_GROUP_CAP": "5"},
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    freeness = next(c for c in doc["checks"] if c["name"].endswith("freeness-codim"))
    assert freeness["status"] == "pass"
    assert freeness["values"]["min_codim_doubled"] == 2


def test_invalid_env_cap_exit_2():
    proc = run_cli(["analyze", "A", "2"], env_extra={"ROOTHK_GROUP_CAP": "many"})
    assert proc.returncode == 2


def test_small_command_determinism():
    a = run_cli(["lemma-check", "--max-rank", "3", "--format", "json"])
    b = run_cli(["lemma-check", "--max-rank", "3", "--format", "json"])
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_reports_have_no_floats():
    proc = run_cli(["sublattices", "B", "3", "--format", "json"])
    doc = json.loads(proc.stdout)

    def walk(x):
        assert not isinstance(x, float), f"float leaked into report: {x}"
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(doc)
    # Rational values are rendered as exact p/q strings.
    dual_row = next(c for c in doc["checks"] if c["name"] == "sublattices/B3/D3*")
    assert dual_row["values"]["gram_det"] == "1/4"


def test_e8_analyze_skips_freeness_quickly():
    proc = run_cli(["analyze", "E", "8", "--lattice", "root", "--format", "json"])
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    freeness = next(c for c in doc["checks"] if c["name"].endswith("freeness-codim"))
    assert freeness["status"] == "skipped"
    form = next(c for c in doc["checks"] if c["name"].endswith("symplectic-form-dim"))
    assert form["values"]["dim"] == 1
