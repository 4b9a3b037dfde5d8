"""CLI: verbs, exit codes, config handling, deterministic reports."""

import io
import json
import subprocess
import sys

import pytest

from mockrad.cli import RunConfig, cmd_expand, cmd_radial, cmd_verify, load_config, main


def run_config(**kw):
    base = dict(trunc_order=60)
    base.update(kw)
    return RunConfig(**base)


def test_expand_known_name():
    out = io.StringIO()
    assert cmd_expand("5:f0", 20, run_config(), out) == 0
    lines = out.getvalue().splitlines()
    assert lines[0] == "q^0\t1/1"
    assert any(line.startswith("q^1\t1/1") for line in lines)


def test_expand_bilateral_prefix():
    out = io.StringIO()
    assert cmd_expand("B:5:f0", 20, run_config(), out) == 0
    assert out.getvalue().splitlines()[0] == "q^0\t1/1"


def test_expand_unknown_exits_2():
    assert cmd_expand("nosuch", 20, run_config(), io.StringIO()) == 2


def test_verify_watson_small():
    out = io.StringIO()
    assert cmd_verify("watson", run_config(), out) == 0
    text = out.getvalue()
    assert text.count("Verified") == 4


def test_verify_fault_injection_exits_1():
    out = io.StringIO()
    code = cmd_verify("watson", run_config(), out, _inject_fault=("C2", 7, 1))
    assert code == 1
    assert "mismatch at q^7" in out.getvalue()


def test_verify_table_fault_reports_provenance():
    out = io.StringIO()
    code = cmd_verify("order6", run_config(), out, _inject_fault=("6:lambda", 3, 1))
    assert code == 1
    assert "cited-reference" in out.getvalue()


def test_verify_unknown_suite():
    assert cmd_verify("order7", run_config(), io.StringIO()) == 2


def test_radial_exit_codes():
    cfg = run_config(grid="4..7", tolerance=0.1)
    assert cmd_radial("6:lambda", "1/2", cfg, io.StringIO()) == 0
    assert cmd_radial("5:phi0", "1/6", cfg, io.StringIO()) == 3
    assert cmd_radial("5:f0", "2/4", cfg, io.StringIO()) == 4
    assert cmd_radial("nosuch", "1/2", cfg, io.StringIO()) == 2


def test_radial_csv_output():
    out = io.StringIO()
    cfg = run_config(grid="4..7", tolerance=0.1, format="csv")
    assert cmd_radial("6:lambda", "1/2", cfg, out) == 0
    lines = out.getvalue().splitlines()
    assert lines[0] == "r,re_diff,im_diff,residual"
    assert len(lines) == 5


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("precision-bits = 192\ntrunc-order = 80\n")
    cfg = load_config(str(cfg_file), {})
    assert cfg.precision_bits == 192 and cfg.trunc_order == 80
    monkeypatch.setenv("MOCKRAD_PRECISION", "256")
    cfg = load_config(str(cfg_file), {})
    assert cfg.precision_bits == 256          # env overrides precision only
    assert cfg.trunc_order == 80
    cfg = load_config(str(cfg_file), {"precision_bits": 320})
    assert cfg.precision_bits == 320          # flags override env


def test_config_rejects_unknown_keys(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("speed = 11\n")
    with pytest.raises(ValueError):
        load_config(str(bad), {})


def test_config_invariants():
    with pytest.raises(ValueError):
        RunConfig(precision_bits=32)
    with pytest.raises(ValueError):
        RunConfig(trunc_order=10)
    with pytest.raises(ValueError):
        RunConfig(format="yaml")


def test_catalog_verb():
    proc = subprocess.run(
        [sys.executable, "-m", "mockrad.cli", "catalog"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["schema"] == "mockrad/1"
    assert len(doc["catalog"]) == 28
    by_name = {r["name"]: r for r in doc["recipes"]}
    assert by_name["5:chi0"]["variant"] == "modified"
    assert isinstance(by_name["5:f0"]["modular_product"], list)
    assert by_name["5:psi0"]["modular_product"]["base"] == "5:f0"


def test_verify_reports_are_deterministic(tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = io.StringIO()
        cfg = run_config(output_dir=str(tmp_path / sub), format="json")
        assert cmd_verify("watson", cfg, out) == 0
        outs.append(((tmp_path / sub / "verify_watson.json").read_bytes(), out.getvalue()))
    assert outs[0] == outs[1]
    doc = json.loads(outs[0][1])
    assert doc["schema"] == "mockrad/1"
    assert doc["config"]["trunc_order"] == 60


def test_main_entry(tmp_path):
    assert main(["expand", "5:f0", "--order", "12"]) == 0
    assert main(["verify", "watson", "--trunc", "50"]) == 0
    assert main(["radial", "6:mu", "--zeta", "1/2", "--grid", "4..7", "--tol", "0.1"]) == 0
