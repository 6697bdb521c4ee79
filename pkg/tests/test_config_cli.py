import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from heatcontent.cli import main
from heatcontent.config import ConfigError, load_config, parse_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

FLAT = """
[model]
regime = "flat"
m = 1
delta1 = 0.5
delta2 = 1.0

[[phi]]
coeffs = [[1.0, 0.0]]

[[rho]]
coeffs = [[1.0, 0.0]]

[oracle]
N = 256
"""


def write(tmp_path, text, name="run.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_flat():
    cfg = parse_config(FLAT)
    assert cfg.model.delta1 == 0.5 and cfg.model.m == 1
    assert cfg.oracle.N == 256 and cfg.oracle.tolerances == (1e-3, 1e-2, 2e-2)
    assert not cfg.closed


@pytest.mark.parametrize("name", ["flat-m1.toml", "twisted-m2.toml", "warped-m2.toml", "circle.toml"])
def test_shipped_configs_load(name):
    cfg = load_config(CONFIGS / name)
    assert cfg.phi.ell == cfg.model.ell


@pytest.mark.parametrize("patch,path", [
    (("regime = \"flat\"", "regime = \"sphere\""), "model.regime"),
    (("delta1 = 0.5", "delta1 = \"x\""), "model.delta1"),
    (("N = 256", "N = 8"), "oracle.N"),
    (("coeffs = [[1.0, 0.0]]\n\n[[rho]]", "coeffs = [[1.0, 0.0, 0.0]]\n\n[[rho]]"), "phi[0].coeffs"),
    (("m = 1", "m = 1\ntwist = [0.1]"), "model.twist"),
    (("m = 1", "m = 1\nwarp = [0.0, 0.4, -0.4]"), "model.warp"),
])
def test_config_errors_name_the_key(patch, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(FLAT.replace(*patch))
    assert exc.value.path == path


def test_bad_warp_profile():
    text = FLAT.replace('regime = "flat"', 'regime = "warped"').replace("delta1 = 0.5", "m = 2").replace(
        "m = 1\n", "warp = [0.0, 0.4, -0.3]\n")
    text = text.replace("coeffs = [[1.0, 0.0]]", "mode = [0]\ncoeffs = [[1.0, 0.0, 0.0, 0.0]]")
    with pytest.raises(ConfigError, match="model.warp"):
        parse_config(text)


def test_toml_syntax_error_reports_location():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("[model]\nregime = 'flat'\nm = = 1\n")


def test_coeffs_command_json(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["coeffs", "--config", str(write(tmp_path, FLAT)), "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["schema_version"] == "1.0" and "timestamp" in data
    assert [c["n"] for c in data["coefficients"]] == [0, 1, 2]
    assert data["coefficients"][2]["value"][0] == pytest.approx(-0.25)
    assert "beta_n" in capsys.readouterr().out


def test_coeffs_json_to_stdout(tmp_path, capsys):
    assert main(["coeffs", "--config", str(write(tmp_path, FLAT)), "--json", "-"]) == 0
    text = capsys.readouterr().out
    data = json.loads(text[text.index("{"):])
    assert data["coefficients"][0]["value"][0] == pytest.approx(1.0)


def test_simulate_and_compare(tmp_path):
    cfg = write(tmp_path, FLAT.replace("N = 256", "N = 512"))
    csv_path = tmp_path / "curve.csv"
    assert main(["simulate", "--config", str(cfg), "--csv", str(csv_path), "--json", str(tmp_path / "m.json")]) == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "t,beta_real,beta_imag" and len(rows) == 41
    assert json.loads((tmp_path / "m.json").read_text())["metadata"]["N"] == 512
    rep = tmp_path / "report.json"
    assert main(["compare", "--config", str(cfg), "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["verdicts"] == ["pass"] * 3


def test_simulate_needs_csv(tmp_path, capsys):
    assert main(["simulate", "--config", str(write(tmp_path, FLAT))]) == 2
    assert "output.csv" in capsys.readouterr().err


def test_compare_reports_failure(tmp_path):
    # tolerances far below the discretization error
    cfg = write(tmp_path, FLAT.replace("N = 256", "N = 256\ntolerances = [1e-15, 1e-15, 1e-15]"))
    assert main(["compare", "--config", str(cfg)]) == 1


def test_math_domain_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, FLAT.replace("delta2 = 1.0", "delta2 = 0.0"))
    assert main(["coeffs", "--config", str(cfg)]) == 3
    err = capsys.readouterr().err
    assert "component 0" in err and "mode ()" in err


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["coeffs", "--config", str(tmp_path / "missing.toml")]) == 2
    assert "config error" in capsys.readouterr().err


def test_circle_compare(capsys):
    assert main(["compare", "--config", str(CONFIGS / "circle.toml")]) == 0
    assert "beta_2" in capsys.readouterr().out


def test_verify_algebra(capsys):
    assert main(["verify", "--suite", "algebra"]) == 0
    assert "checks passed" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    # the shipped config names a JSON output, written relative to the working directory
    res = subprocess.run([sys.executable, "-m", "heatcontent", "coeffs", "--config", str(CONFIGS / "warped-m2.toml")],
                         capture_output=True, text=True, cwd=tmp_path)
    assert res.returncode == 0
    assert (tmp_path / "warped-m2.json").exists()
    line = [l for l in res.stdout.splitlines() if l.strip().startswith("2")][0]
    assert float(line.split()[1]) == pytest.approx(-0.8 * 2 * np.pi, rel=1e-10)
