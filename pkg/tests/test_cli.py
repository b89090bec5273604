from __future__ import annotations

import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from weyl1d.cli import EXIT_DOMAIN, EXIT_ERROR, EXIT_IO, EXIT_MISS, EXIT_PASS, main


def write_config(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def run_cli(args, capsys=None):
    code = main([str(a) for a in args])
    out = capsys.readouterr() if capsys is not None else None
    return code, out


def verdict(out_dir):
    return json.loads((out_dir / "verdict.json").read_text())


def test_fixtures_listing(capsys):
    code, out = run_cli(["fixtures", "--json"], capsys)
    assert code == EXIT_PASS
    rows = json.loads(out.out)
    names = {r["name"] for r in rows}
    assert {"flat_pi", "circle_r1", "sinpow_N3"} <= names
    code, out = run_cli(["fixtures"], capsys)
    assert "weyl_constant" in out.out


def test_no_command_is_usage_error(capsys):
    assert run_cli([], capsys)[0] == EXIT_ERROR


def test_spectrum_task_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, {"schema_version": 1, "task": "spectrum",
                                  "space": {"fixture": "sinpow_N2"},
                                  "task_parameters": {"elements": 400}})
    code, _ = run_cli(["--config", cfg, "--out", out, "spectrum"], capsys)
    assert code == EXIT_PASS
    v = verdict(out)
    assert v["passed"] is True and v["fixture"] == "sinpow_N2"
    assert v["checks"]["eigenvalue_law"] is True
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[0] == "index,eigenvalue,resolved"
    assert (out / "plotdata" / "eigenvalues.dat").exists()


def test_results_byte_identical_across_runs(tmp_path, capsys):
    cfg = write_config(tmp_path, {"schema_version": 1, "task": "weyl",
                                  "space": {"fixture": "flat_pi"},
                                  "task_parameters": {"elements": 1000}})
    for d in ("a", "b"):
        assert run_cli(["--config", cfg, "--out", tmp_path / d, "weyl"], capsys)[0] == EXIT_PASS
    for f in ("results.csv", "verdict.json", "plotdata/weyl_ratio.dat"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_nonconvex_sampled_density_misses(tmp_path, capsys):
    g = np.linspace(0, math.pi, 60)
    data = np.column_stack([g, 2.0 + np.sin(3 * g)])
    np.savetxt(tmp_path / "density.csv", data, delimiter=",")
    cfg = write_config(tmp_path, {"schema_version": 1, "task": "convexity-check",
                                  "space": {"kind": "interval", "length": math.pi,
                                            "density": {"family": "sampled", "file": "density.csv",
                                                        "K": 0.0, "N": 2.0}}})
    code, out = run_cli(["--config", cfg, "--out", tmp_path / "o", "convexity-check"], capsys)
    assert code == EXIT_MISS
    report = json.loads(out.out)
    assert report["passed"] is False and report["worst_margin"] < 0
    assert verdict(tmp_path / "o")["witness"] is not None


@pytest.mark.parametrize("cfg, key", [
    ({"schema_version": 1, "task": "weyl", "bogus": 1}, "bogus"),
    ({"schema_version": 1, "task": "weyl", "task_parameters": {"elemnts": 10}}, "elemnts"),
    ({"schema_version": 1, "task": "weyl", "task_parameters": {"elements": "many"}}, "elements"),
    ({"schema_version": 1, "task": "weyl", "space": {"kind": "interval", "length": 1,
                                                     "density": {"family": "constant",
                                                                 "colour": 1}}}, "colour"),
    ({"task": "weyl"}, "schema_version"),
    ({"schema_version": 2, "task": "weyl"}, "schema_version"),
    ({"schema_version": 1, "task": "dance"}, "task"),
    ({"schema_version": 1, "task": "weyl", "space": {"fixture": "nope"}}, "fixture"),
    ({"schema_version": 1, "task": "weyl", "space": {"fixture": "flat_pi", "length": 2}}, "length"),
])
def test_malformed_config_names_key(tmp_path, capsys, cfg, key):
    path = write_config(tmp_path, cfg)
    code, out = run_cli(["--config", path, "--out", tmp_path / "o", "weyl"], capsys)
    assert code == EXIT_ERROR
    assert key in out.err


def test_invalid_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out = run_cli(["--config", path, "weyl"], capsys)
    assert code == EXIT_ERROR
    assert "JSON" in out.err


def test_config_task_must_match_command(tmp_path, capsys):
    path = write_config(tmp_path, {"schema_version": 1, "task": "weyl"})
    assert run_cli(["--config", path, "spectrum"], capsys)[0] == EXIT_ERROR


def test_missing_config_is_io_error(tmp_path, capsys):
    assert run_cli(["--config", tmp_path / "absent.json", "weyl"], capsys)[0] == EXIT_IO


def test_domain_error_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, {"schema_version": 1, "task": "spectrum",
                                  "space": {"kind": "interval", "length": -1.0}})
    assert run_cli(["--config", cfg, "--out", tmp_path / "o", "spectrum"], capsys)[0] == EXIT_DOMAIN


def test_heat_trace_degenerate_fixture_misses(tmp_path, capsys):
    code, _ = run_cli(["--out", tmp_path, "heat-trace", "--fixture", "sinpow_N3"], capsys)
    assert code == EXIT_MISS
    v = verdict(tmp_path)
    assert v["liminf_estimate"] < v["lower_bound"]


def test_tolerance_scale_relaxes_targets(tmp_path, capsys):
    args = ["--out", tmp_path, "--tolerance-scale", "10", "heat-trace", "--fixture", "sinpow_N3"]
    assert run_cli(args, capsys)[0] == EXIT_PASS


@pytest.mark.parametrize("suite", ["lebesgue", "squares", "xlogx"])
def test_abelian_suites(tmp_path, capsys, suite):
    code, _ = run_cli(["--out", tmp_path, "abelian", "--suite", suite], capsys)
    assert code == EXIT_PASS
    assert verdict(tmp_path)["suite"] == suite


def test_ratio_integral_with_threads(tmp_path, capsys):
    code, _ = run_cli(["--out", tmp_path, "--threads", "2", "ratio-integral",
                       "--fixture", "sinpow_N3"], capsys)
    assert code == EXIT_PASS
    v = verdict(tmp_path)
    assert v["extrapolated_limit"] == pytest.approx(math.pi / 2, rel=1e-3)
    assert v["checks"]["domination"] is True


def test_inline_expression_density(tmp_path, capsys):
    cfg = write_config(tmp_path, {"schema_version": 1, "task": "convexity-check",
                                  "space": {"kind": "interval", "length": 1.0,
                                            "density": {"family": "expnegf", "f": "x**2",
                                                        "K": -2.5, "N": 2.0}}})
    code, _ = run_cli(["--config", cfg, "--out", tmp_path / "o", "convexity-check"], capsys)
    assert code == EXIT_PASS


def test_cache_env_var_populates_directory(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("WEYL1D_CACHE_DIR", str(tmp_path / "cache"))
    cfg = write_config(tmp_path, {"schema_version": 1, "task": "spectrum",
                                  "task_parameters": {"elements": 2000}})
    assert run_cli(["--config", cfg, "--out", tmp_path / "o", "spectrum"], capsys)[0] == EXIT_PASS
    assert list((tmp_path / "cache").glob("*.bin"))


def test_invalid_threads(capsys):
    assert run_cli(["--threads", "0", "weyl"], capsys)[0] == EXIT_ERROR


@pytest.mark.skipif(shutil.which("weyl1d") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["weyl1d", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "exit codes" in proc.stdout


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "weyl1d.cli", "fixtures"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "flat_pi" in proc.stdout
