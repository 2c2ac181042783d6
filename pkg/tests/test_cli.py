import json
from pathlib import Path

import pytest

from dcl import cli
from dcl.config import RunConfig, parse_config
from dcl.errors import ValidationFailed
from dcl.reports import canonical_json, to_jsonable, trace_matrix


# ------------------------------------------------------------------ config
def test_config_roundtrip_identity():
    cfg = RunConfig(alpha="phi", tau="0.07", mu="1/9", seed=42, figures=False, threads=2)
    assert parse_config(cfg.serialize()) == cfg


def test_config_parsing_rules():
    cfg = parse_config("# comment\nalpha=sqrt2\ntau=1/30  # inline\nseed=9\nfigures=false\n")
    assert cfg.alpha == "sqrt2" and cfg.seed == 9 and cfg.figures is False
    with pytest.raises(ValueError):
        parse_config("bogus_key=1")
    with pytest.raises(ValueError):
        parse_config("tau")
    with pytest.raises(ValueError):
        parse_config("tau=2")  # out of range
    with pytest.raises(ValueError):
        parse_config("figures=maybe")


def test_trace_matrix_shape():
    m = trace_matrix()
    assert m["row_count"] == 14
    ids = [r["id"] for r in m["rows"]]
    assert len(set(ids)) == 14
    expected = {"3.1", "3.2", "3.3", "4.1", "4.2", "5.1", "5.2", "6.1", "6.2", "7.1", "7.2", "8.1", "T1.1", "T1.2"}
    assert set(ids) == expected
    # document round-trips through JSON
    assert json.loads(canonical_json(m)) == to_jsonable(m)


# --------------------------------------------------------------------- CLI
def run_cli(tmp_path, *argv) -> tuple[int, Path]:
    out = tmp_path / "out"
    code = cli.main(["--out-dir", str(out), "--no-figures", *argv])
    return code, out


def test_cli_params_success(tmp_path):
    code, out = run_cli(
        tmp_path, "--seed", "5", "params", "--alpha", "sqrt2", "--tau", "0.05",
        "--mu", "0.1", "--s-target", "1000",
    )
    assert code == 0
    data = json.loads((out / "params.json").read_text())
    assert data["result"]["J"] == 1
    assert all(c["satisfied"] for c in data["result"]["checks"])


def test_cli_validation_failure_exit_1(tmp_path):
    code, out = run_cli(
        tmp_path, "params", "--goldbach", "--alpha", "sqrt2", "--tau", "1/19",
        "--mu", "5/43", "--s-target", "1000",
    )
    assert code == 1
    data = json.loads((out / "params.json").read_text())
    assert data["error"] == "validation_failed"
    assert data["violations"] == ["pJ_gt_mu_plus_eta"]  # non-empty list


def test_cli_usage_error_exit_2(tmp_path):
    code, _ = run_cli(tmp_path, "params", "--alpha", "quad(1,0,1,2)", "--tau", "0.05", "--mu", "0.1")
    assert code == 2


def test_cli_3aps_emits_triples(tmp_path):
    code, out = run_cli(
        tmp_path, "3aps", "--alpha", "sqrt2", "--tau", "0.1", "--N", "2000", "--limit", "3",
    )
    assert code == 0
    data = json.loads((out / "3aps.json").read_text())
    assert data["result"]["triples"][0] == [3, 5, 7]
    assert (out / "3aps.csv").exists()


def test_cli_goldbach_and_csv(tmp_path):
    code, out = run_cli(
        tmp_path, "goldbach", "--alpha", "sqrt2", "--tau", "0.05",
        "--n-min", "100", "--n-max", "200",
    )
    assert code == 0
    data = json.loads((out / "goldbach.json").read_text())
    assert data["result"]["exceptional_proportion"] == 0.0
    lines = (out / "goldbach.csv").read_text().splitlines()
    assert lines[0] == "n,r,singular_lo,singular_hi"
    assert len(lines) == 1 + 51


def test_cli_verify_52_report_schema(tmp_path):
    code, out = run_cli(
        tmp_path, "--seed", "3", "verify", "--lemma", "5.2", "--alpha", "sqrt2",
        "--pj", "6", "--arc-M", "3", "--N", "100000",
    )
    assert code == 0
    data = json.loads((out / "verify_5.2.json").read_text())
    for key in ("lemma", "instances", "max_ratio", "violations"):
        assert key in data
    assert data["lemma"] == "5.2"
    assert data["violations"] == []


def test_cli_verify_explicit_out_path(tmp_path):
    target = tmp_path / "custom" / "r.json"
    code = cli.main(
        [
            "--out-dir", str(tmp_path / "out"), "--no-figures", "--seed", "3",
            "verify", "--lemma", "5.1", "--alpha", "sqrt2", "--tau", "0.05",
            "--N", "10000", "--out", str(target),
        ]
    )
    assert code == 0
    data = json.loads(target.read_text())
    assert data["lemma"] == "5.1" and data["violations"] == []


def test_cli_trace(tmp_path):
    code, out = run_cli(tmp_path, "trace")
    assert code == 0
    data = json.loads((out / "trace.json").read_text())
    assert data["row_count"] == 14


def test_cli_config_file_and_flag_override(tmp_path):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(RunConfig(alpha="phi", tau="0.1", seed=11).serialize())
    code, out = run_cli(
        tmp_path, "--config", str(cfg_path), "--tau", "0.05", "goldbach",
        "--n-min", "100", "--n-max", "120",
    )
    assert code == 0
    data = json.loads((out / "goldbach.json").read_text())
    assert data["config"]["alpha"] == "phi"  # from file
    assert data["config"]["tau"] == "0.05"  # flag wins
    assert data["config"]["seed"] == 11


def test_cli_determinism_byte_identical(tmp_path):
    args = [
        "--seed", "77", "goldbach", "--alpha", "sqrt2", "--tau", "0.05",
        "--n-min", "100", "--n-max", "160",
    ]
    out = tmp_path / "out"
    assert cli.main(["--out-dir", str(out), "--no-figures", *args]) == 0
    first = (out / "goldbach.json").read_bytes()
    assert cli.main(["--out-dir", str(out), "--no-figures", *args]) == 0
    assert (out / "goldbach.json").read_bytes() == first
