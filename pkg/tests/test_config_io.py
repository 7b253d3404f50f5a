"""Configuration validation, unit ingestion, overrides, and the bit-stable
CSV/JSON export layer."""

import json

import numpy as np
import pytest

from aqpe.config import (
    FREQUENCY_CONVENTION,
    SCHEMA_VERSION,
    apply_overrides,
    load_config,
    parse_config,
)
from aqpe.errors import ConfigError
from aqpe.io import (
    export_csv,
    export_json,
    format_float,
    sha256_file,
    spectral_estimate_from_dict,
    spectral_estimate_to_dict,
)
from aqpe.tomography import estimate_spectrum

TWO_PI = 2 * np.pi


def minimal_doc(**overrides):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "frequency_convention": FREQUENCY_CONVENTION,
        "mode": "ideal",
        "target": {"preset": "xy2", "eta_hz": 1e4},
        "cavity": {"beta": [1.8, 0.0], "xi": [-0.4, 0.0], "n_max": 40},
        "initial_qubit_state": {"eigenstate_weights": [1, 1, 1, 1]},
        "eta_times": [0.0, 1.0],
    }
    doc.update(overrides)
    return doc


def test_parse_minimal_config_units():
    cfg = parse_config(minimal_doc())
    assert cfg.graph.edges[0][2] == pytest.approx(TWO_PI * 1e4)
    assert cfg.beta == 1.8
    assert cfg.xi == -0.4
    # eta_times are converted through the target coupling in rad/s.
    assert cfg.times_s[1] == pytest.approx(1.0 / (TWO_PI * 1e4))
    assert cfg.radius == pytest.approx(1.8)


def test_missing_convention_tag_is_hard_error():
    doc = minimal_doc()
    del doc["frequency_convention"]
    with pytest.raises(ConfigError, match="frequency_convention"):
        parse_config(doc)
    doc["frequency_convention"] = "rad-per-s"
    with pytest.raises(ConfigError, match="frequency_convention"):
        parse_config(doc)


def test_errors_are_itemized():
    doc = minimal_doc(mode="bogus", schema_version=99)
    doc["cavity"]["n_max"] = 0
    with pytest.raises(ConfigError) as err:
        parse_config(doc)
    msg = str(err.value)
    assert "mode" in msg and "schema_version" in msg and "n_max" in msg


def test_times_exclusivity():
    doc = minimal_doc()
    doc["times_s"] = [0.0, 1e-5]
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config(doc)
    del doc["eta_times"]
    cfg = parse_config(doc)
    assert cfg.times_s == (0.0, 1e-5)


def test_weights_length_checked():
    doc = minimal_doc(initial_qubit_state={"eigenstate_weights": [1, 1]})
    with pytest.raises(ConfigError, match="eigenstate_weights"):
        parse_config(doc)


def test_graph_target_with_local_field_rejected_when_engineered():
    graph = {"n_sites": 2, "edges": [[0, 1, 1e4]], "local_z_hz": [100.0, 0.0]}
    doc = minimal_doc(mode="engineered", target={"graph": graph})
    with pytest.raises(ConfigError, match="local_z"):
        parse_config(doc)
    doc["mode"] = "ideal"
    cfg = parse_config(doc)
    assert cfg.graph.local_z[0] == pytest.approx(TWO_PI * 100.0)


def test_default_coupler_detuning_is_opposite():
    cfg = parse_config(minimal_doc(mode="engineered"))
    assert cfg.coupler_delta == pytest.approx(-cfg.delta)
    doc = minimal_doc(mode="engineered", physical={"coupler_delta_hz": -2e9})
    assert parse_config(doc).coupler_delta == pytest.approx(-TWO_PI * 2e9)


def test_truncation_adequacy_checked():
    doc = minimal_doc()
    doc["cavity"] = {"beta": [3.0, 0.0], "xi": 0.0, "n_max": 10}
    with pytest.raises(ConfigError, match="truncation"):
        parse_config(doc)


def test_apply_overrides():
    doc = minimal_doc()
    out = apply_overrides(doc, ["cavity.n_max=60", "tomography.n_theta=128", "mode=ideal"])
    assert out["cavity"]["n_max"] == 60
    assert out["tomography"]["n_theta"] == 128
    assert doc["cavity"]["n_max"] == 40  # original untouched
    with pytest.raises(ConfigError, match="key.path"):
        apply_overrides(doc, ["nonsense"])


def test_load_config_reports_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="valid JSON"):
        load_config(path)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def test_format_float_round_trips():
    rng = np.random.default_rng(51)
    for _ in range(200):
        x = float(rng.normal() * 10.0 ** float(rng.integers(-12, 12)))
        assert float(format_float(x)) == x


def test_export_csv_layout(tmp_path):
    path = export_csv(tmp_path / "t.csv", ["a", "b"], [(1.0, 0.1), (2.0, 0.2)])
    text = path.read_bytes().decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == "a,b"
    assert lines[1].startswith("1,")
    assert "\r" not in text


def test_export_json_sorted_and_stable(tmp_path):
    p1 = export_json(tmp_path / "a.json", {"b": 1, "a": [2, 3]})
    p2 = export_json(tmp_path / "b.json", {"a": [2, 3], "b": 1})
    assert sha256_file(p1) == sha256_file(p2)
    text = p1.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


def test_spectral_estimate_round_trip():
    est = estimate_spectrum(
        [(-0.8123456789012345, 0.25), (0.0, 0.5)], 1.7e-5, reference_height=1.0
    )
    doc = json.loads(json.dumps(spectral_estimate_to_dict(est)))
    back = spectral_estimate_from_dict(doc)
    assert np.array_equal(back.thetas, est.thetas)
    assert np.array_equal(back.energies, est.energies)
    assert np.array_equal(back.weights, est.weights)
    assert back.evolution_time == est.evolution_time
