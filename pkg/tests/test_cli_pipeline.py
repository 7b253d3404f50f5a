"""End-to-end pipeline runs and the command-line surface: artifact layout,
manifest integrity, exit codes, and the full physical diagnostic mode."""

import json

import numpy as np
import pytest

from aqpe.cli import main
from aqpe.config import SCHEMA_VERSION, FREQUENCY_CONVENTION, parse_config
from aqpe.io import sha256_file
from aqpe.pipeline import run_experiment, solve_layout

TWO_PI = 2 * np.pi


def small_doc(**overrides):
    """Coarse but complete ideal-mode run that finishes in a few seconds."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "frequency_convention": FREQUENCY_CONVENTION,
        "mode": "ideal",
        "target": {"preset": "xy2", "eta_hz": 1e4},
        "cavity": {"beta": [1.2, 0.0], "xi": [-0.3, 0.0], "n_max": 24},
        "initial_qubit_state": {"eigenstate_weights": [1, 1, 1, 1]},
        "eta_times": [0.0, 1.0],
        "tomography": {
            "radius": 1.2,
            "n_theta": 180,
            "grid_extent": 3.2,
            "grid_step": 0.4,
            "min_prominence": 0.02,
        },
    }
    doc.update(overrides)
    return doc


def write_doc(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_run_experiment_artifacts_and_manifest(tmp_path):
    cfg = parse_config(small_doc())
    out = tmp_path / "out"
    manifest = run_experiment(cfg, out)
    names = set(manifest.files)
    assert {"profile_000.csv", "profile_001.csv", "wigner_000.csv",
            "wigner_001.csv", "estimates.json"} <= names
    manifest.verify()  # every digest matches what was written
    assert (out / "manifest.json").is_file()
    est_doc = json.loads((out / "estimates.json").read_text(encoding="utf-8"))
    assert est_doc["frequency_convention"] == FREQUENCY_CONVENTION
    # Snapshot at eta*t = 1 recovers the two-qubit spectrum.
    peaks = est_doc["estimates"][1]["peaks"]
    eta = TWO_PI * 1e4
    energies = sorted(p["energy_rad_per_s"] for p in peaks)
    assert len(peaks) == 3
    # Coarse angular sampling here; the fine-grid accuracy check lives in the
    # acceptance suite.
    assert np.allclose(energies, [-eta, 0.0, eta], atol=0.05 * eta)


def test_run_experiment_is_deterministic(tmp_path):
    cfg = parse_config(small_doc())
    m1 = run_experiment(cfg, tmp_path / "a")
    m2 = run_experiment(cfg, tmp_path / "b")
    assert m1.files == m2.files  # same names and same digests


def test_solve_layout_matches_requested_eta():
    cfg = parse_config(small_doc(mode="engineered"))
    with pytest.warns(UserWarning):
        layout, coeffs = solve_layout(cfg)
    assert coeffs.eta_eng[0] == pytest.approx(TWO_PI * 1e4, rel=1e-12)
    assert np.abs(coeffs.lambda_eng).max() < 1e-8


def test_full_mode_reports_leakage(tmp_path):
    doc = small_doc(mode="full")
    doc["cavity"]["n_max"] = 10
    doc["cavity"]["beta"] = [1.0, 0.0]
    doc["tomography"]["radius"] = 1.0
    doc["eta_times"] = [0.0, 0.5]
    cfg = parse_config(doc)
    with pytest.warns(UserWarning):
        manifest = run_experiment(cfg, tmp_path / "full", artifacts=("estimates",))
    leak = manifest.derived["coupler_leakage"]
    assert len(leak) == 2
    assert leak[0] < 1e-9  # couplers start in the ground state
    assert 0.0 <= manifest.derived["coupler_leakage_max"] < 0.5


def test_cli_run_and_estimate(tmp_path, capsys):
    path = write_doc(tmp_path, small_doc())
    out = tmp_path / "cli-out"
    assert main(["run", str(path), "--out", str(out)]) == 0
    assert (out / "manifest.json").is_file()
    assert (out / "wigner_000.csv").is_file()
    out2 = tmp_path / "cli-est"
    assert main(["estimate", str(path), "--out", str(out2)]) == 0
    assert (out2 / "estimates.json").is_file()
    assert not (out2 / "wigner_000.csv").exists()


def test_cli_override_changes_output(tmp_path):
    path = write_doc(tmp_path, small_doc())
    out = tmp_path / "o"
    code = main(["estimate", str(path), "--out", str(out),
                 "--set", "tomography.n_theta=128"])
    assert code == 0
    text = (out / "profile_000.csv").read_text(encoding="utf-8")
    assert len(text.strip().split("\n")) == 129  # header plus samples


def test_cli_exit_code_config_error(tmp_path, capsys):
    doc = small_doc()
    del doc["frequency_convention"]
    path = write_doc(tmp_path, doc)
    assert main(["run", str(path), "--out", str(tmp_path / "x")]) == 1
    assert "configuration error" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "nope.json")]) == 1


def test_cli_exit_code_truncation(tmp_path, capsys):
    # Pinning the Wigner truncation at the bare state size fails the
    # displaced-tail gate out at the grid corners.
    doc = small_doc()
    doc["tomography"]["wigner_n_max"] = 24
    path = write_doc(tmp_path, doc)
    assert main(["run", str(path), "--out", str(tmp_path / "x")]) == 3
    assert "truncation" in capsys.readouterr().err


def test_cli_strict_hierarchy_is_config_error(tmp_path, capsys):
    path = write_doc(tmp_path, small_doc(mode="engineered"))
    assert main(["run", str(path), "--out", str(tmp_path / "x"), "--strict"]) == 1
    assert "hierarchy" in capsys.readouterr().err


def test_cli_solve_params(capsys):
    assert main(["solve-params", "--eta", "1e4", "--g", "1e7", "--delta", "1e9"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["j_cross_hz"] == pytest.approx(np.sqrt(2e27 * 1e4 / 3e14), rel=1e-12)
    assert doc["eta_eng_hz"] == pytest.approx(1e4, rel=1e-12)
    assert len(doc["j_local_roots_hz"]) == 2


def test_cli_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("AQPE_OUT_DIR", str(tmp_path / "env-out"))
    path = write_doc(tmp_path, small_doc())
    assert main(["estimate", str(path)]) == 0
    assert (tmp_path / "env-out" / "estimates.json").is_file()
