"""Bit-stable data export: CSV and JSON writers, digests, and the run manifest.

Data files carry no timestamps so identical configurations produce byte
identical outputs; the manifest holds the run's only timestamp.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .tomography import SpectralEstimate

ESTIMATES_SCHEMA_VERSION = 1
MANIFEST_SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip any IEEE double."""
    return f"{float(x):.17g}"


def export_csv(path, header, rows) -> Path:
    """Write a CSV file (UTF-8, LF line endings, header row, 17-digit floats)."""
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(format_float(x) for x in row) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing CSV {path}: {exc}") from exc
    return path


def export_json(path, obj) -> Path:
    """Write a JSON document with sorted keys and a trailing newline."""
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing JSON {path}: {exc}") from exc
    return path


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def spectral_estimate_to_dict(est: SpectralEstimate) -> dict:
    """JSON-ready form of a spectral estimate; floats survive bit-exactly."""
    return {
        "evolution_time_s": est.evolution_time,
        "min_separation_rad": est.min_separation,
        "peaks": [
            {"theta_rad": float(th), "energy_rad_per_s": float(en), "weight": float(w)}
            for th, en, w in zip(est.thetas, est.energies, est.weights)
        ],
    }


def spectral_estimate_from_dict(doc: dict) -> SpectralEstimate:
    peaks = doc["peaks"]
    return SpectralEstimate(
        evolution_time=doc["evolution_time_s"],
        thetas=np.array([p["theta_rad"] for p in peaks], dtype=float),
        energies=np.array([p["energy_rad_per_s"] for p in peaks], dtype=float),
        weights=np.array([p["weight"] for p in peaks], dtype=float),
        min_separation=doc["min_separation_rad"],
    )


@dataclass
class RunManifest:
    """Run provenance: config echo, derived quantities, and file digests."""

    config: dict
    derived: dict
    files: dict  # relative name -> sha256 hex digest
    created_at: str
    out_dir: Path

    def to_dict(self) -> dict:
        return {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "created_at": self.created_at,
            "config": self.config,
            "derived": self.derived,
            "files": self.files,
        }

    def verify(self) -> None:
        """Check every listed file exists and matches its digest."""
        for name, digest in self.files.items():
            path = self.out_dir / name
            if not path.is_file():
                raise FileNotFoundError(f"manifest lists missing file {path}")
            actual = sha256_file(path)
            if actual != digest:
                raise ValueError(f"digest mismatch for {path}: {actual} != {digest}")


def write_manifest(out_dir, config_echo: dict, derived: dict, file_names) -> RunManifest:
    out_dir = Path(out_dir)
    manifest = RunManifest(
        config=config_echo,
        derived=derived,
        files={name: sha256_file(out_dir / name) for name in sorted(file_names)},
        created_at=datetime.now(timezone.utc).isoformat(),
        out_dir=out_dir,
    )
    export_json(out_dir / "manifest.json", manifest.to_dict())
    return manifest
