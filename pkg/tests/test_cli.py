import json
import os

import numpy as np
import pytest

from qce.cli import ConfigError, ExperimentConfig, builtin_presets, main, run

SMALL_QKT = """\
[model]
kind = qkt
kappa = 0.0
p_rot = 1.5707963267948966
tau = 1.0
j = 10

[state:coherent]
prep = angles
theta = 0.9
phi = 0.0

[run]
type = entropy
n_kicks = 40
"""

SMALL_CLASSICAL = """\
[model]
kind = amol
V1 = 160.0
theta_L_deg = 80.0
muB_Bx = 12.0
F = 4
spin_scale = normalized

[grid]
n_points = 256
n_periods = 1

[state:regular]
z0 = -0.15
p0 = 0.0
theta = 1.27
phi = 0.0

[run]
type = classical_section
section_variables = mu_y
n_crossings = 12
dt = 1e-3
"""


def read_lines(path):
    with open(path) as fh:
        return fh.read().splitlines()


def test_config_round_trip():
    config = ExperimentConfig.parse(SMALL_QKT)
    text = config.serialize()
    again = ExperimentConfig.parse(text)
    assert again.serialize() == text
    assert again.hash() == config.hash()


def test_config_overrides():
    config = ExperimentConfig.parse(SMALL_QKT)
    other = config.with_overrides(["run.n_kicks=100", "model.kappa=1.5"])
    assert other.get("run", "n_kicks", cast=int) == 100
    assert config.get("run", "n_kicks", cast=int) == 40
    with pytest.raises(ConfigError):
        config.with_overrides(["no_dot_here"])


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(SMALL_QKT.replace("type = entropy", "type = bogus"))
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(SMALL_QKT.replace("kind = qkt", "kind = what"))
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(SMALL_CLASSICAL.replace("V1 = 160.0", "V1 = -3"))
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(SMALL_CLASSICAL.replace("n_points = 256", "n_points = 100"))


def test_presets_validate():
    presets = builtin_presets()
    assert len(presets) == 6
    for name, config in presets.items():
        assert config.hash()  # construction already validated


def test_zero_torsion_entropy_is_zero(tmp_path):
    """Pure rotation keeps coherent states coherent: the pair entropy vanishes."""
    config = ExperimentConfig.parse(SMALL_QKT)
    out = tmp_path / "run"
    manifest = run(config, str(out))
    data = np.loadtxt(out / "entropy_coherent.csv", delimiter=",", skiprows=2)
    assert data.shape == (41, 2)
    assert np.abs(data[:, 1]).max() < 1e-10
    assert [o["name"] for o in manifest["outputs"]] == ["entropy_coherent.csv"]


def test_rerun_is_byte_identical(tmp_path):
    config = ExperimentConfig.parse(SMALL_QKT)
    m1 = run(config, str(tmp_path / "a"))
    m2 = run(config, str(tmp_path / "b"))
    assert m1["config_hash"] == m2["config_hash"]
    for o1, o2 in zip(m1["outputs"], m2["outputs"]):
        assert o1 == o2
    raw1 = (tmp_path / "a" / "entropy_coherent.csv").read_bytes()
    raw2 = (tmp_path / "b" / "entropy_coherent.csv").read_bytes()
    assert raw1 == raw2


def test_classical_section_run(tmp_path):
    config = ExperimentConfig.parse(SMALL_CLASSICAL)
    run(config, str(tmp_path))
    lines = read_lines(tmp_path / "sections_mu_y.csv")
    assert lines[0].startswith("#")
    assert lines[1].split(",")[:5] == ["z_over_lambda", "p_over_hbark", "theta",
                                       "phi", "crossing_time"]
    assert len(lines) == 2 + 12


def test_csv_headers_carry_units(tmp_path):
    config = ExperimentConfig.parse(SMALL_QKT)
    run(config, str(tmp_path))
    header = read_lines(tmp_path / "entropy_coherent.csv")[0]
    assert "time_units=kicks" in header


def test_cli_validate_and_errors(tmp_path, capsys):
    path = tmp_path / "good.cfg"
    path.write_text(SMALL_QKT)
    assert main(["validate", str(path)]) == 0

    bad = tmp_path / "bad.cfg"
    bad.write_text(SMALL_QKT.replace("type = entropy", "type = nope"))
    code = main(["validate", str(bad)])
    assert code == 2
    err = capsys.readouterr().err
    record = json.loads(err.strip().splitlines()[-1])
    assert record["error"]["type"] == "config"


def test_cli_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out.split()
    assert "fig2_entropy" in out and len(out) == 6


def test_cli_unknown_preset(capsys):
    assert main(["preset", "fig99"]) == 2


def test_cli_run_subcommand(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(SMALL_QKT)
    out = tmp_path / "out"
    assert main(["run", str(path), "--out", str(out)]) == 0
    assert (out / "manifest.json").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"][0]["name"] == "entropy_coherent.csv"
    assert "created_utc" in manifest


def test_manifest_lists_all_outputs(tmp_path):
    config = ExperimentConfig.parse(SMALL_CLASSICAL)
    manifest = run(config, str(tmp_path))
    listed = {o["name"] for o in manifest["outputs"]}
    on_disk = {f for f in os.listdir(tmp_path) if f != "manifest.json"}
    assert listed == on_disk


def test_truncated_run_emits_warning_and_files(tmp_path):
    text = SMALL_QKT.replace("type = entropy", "type = truncated").replace(
        "kappa = 0.0", "kappa = 3.0")
    config = ExperimentConfig.parse(text).with_overrides(["run.kept=3",
                                                          "run.n_kicks=20"])
    manifest = run(config, str(tmp_path))
    names = {o["name"] for o in manifest["outputs"]}
    assert names == {"entropy_coherent.csv", "entropy_coherent_truncated.csv"}
    assert any("capture" in w for w in manifest["warnings"])
