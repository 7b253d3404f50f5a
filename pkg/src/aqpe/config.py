"""Experiment configuration: a single JSON document, validated on ingestion.

All configured frequencies are linear frequencies in Hz and are multiplied by
2 pi when ingested ("eta = 10 kHz" becomes 2 pi * 1e4 rad/s internally).  The
document must carry the tag ``"frequency_convention": "linear-Hz-times-2pi"``
so that this convention is explicit in every stored run.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .hamiltonians import DEFAULT_HIERARCHY_RATIOS, XYGraph

FREQUENCY_CONVENTION = "linear-Hz-times-2pi"
SCHEMA_VERSION = 1
TWO_PI = 2 * np.pi

MODES = ("ideal", "engineered", "full")


def _as_complex(value, errors, key):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    errors.append(f"{key}: expected a number or [re, im] pair, got {value!r}")
    return 0j


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description in internal units (rad/s, seconds)."""

    mode: str
    graph: XYGraph  # ideal target graph (rad/s couplings)
    beta: complex
    xi: complex
    n_max: int
    eigenstate_weights: tuple | None
    basis: str | None
    times_s: tuple
    radius: float
    n_theta: int
    grid_extent: float
    grid_step: float
    wigner_n_max: int | None
    min_prominence: float
    emit_grids: bool
    g: float  # rad/s
    delta: float
    coupler_delta: float
    omega_c: float
    hierarchy_ratios: tuple
    reference: str | None
    strict: bool
    raw: dict = field(repr=False, default_factory=dict)  # verbatim echo

    @property
    def n_qubits(self) -> int:
        return self.graph.n_sites


def _parse_target(doc, errors):
    target = doc.get("target")
    if not isinstance(target, dict):
        errors.append("target: missing or not an object")
        return None, None
    if "preset" in target:
        if target["preset"] != "xy2":
            errors.append(f"target.preset: unknown preset {target['preset']!r}")
            return None, None
        eta_hz = target.get("eta_hz")
        if not isinstance(eta_hz, (int, float)) or eta_hz <= 0:
            errors.append("target.eta_hz: must be a positive number")
            return None, None
        eta = TWO_PI * float(eta_hz)
        return XYGraph(n_sites=2, edges=((0, 1, eta),)), eta
    if "graph" in target:
        gspec = target["graph"]
        try:
            edges = tuple(
                (int(k), int(kp), TWO_PI * float(eta_hz))
                for k, kp, eta_hz in gspec.get("edges", ())
            )
            local_z = gspec.get("local_z_hz")
            if local_z is not None:
                local_z = tuple(TWO_PI * float(x) for x in local_z)
            graph = XYGraph(n_sites=int(gspec["n_sites"]), edges=edges, local_z=local_z)
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"target.graph: {exc}")
            return None, None
        etas = [abs(e[2]) for e in graph.edges]
        return graph, max(etas) if etas else 0.0
    errors.append("target: needs either 'preset' or 'graph'")
    return None, None


def parse_config(doc: dict) -> ExperimentConfig:
    """Validate a configuration document; raises ConfigError with every
    problem itemized."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    errors: list[str] = []

    convention = doc.get("frequency_convention")
    if convention != FREQUENCY_CONVENTION:
        # Hard error: prevents silent factor-2pi mistakes.
        raise ConfigError(
            f"frequency_convention must be exactly {FREQUENCY_CONVENTION!r} "
            f"(got {convention!r}); all configured frequencies are linear Hz"
        )
    if doc.get("schema_version") != SCHEMA_VERSION:
        errors.append(f"schema_version: expected {SCHEMA_VERSION}")

    mode = doc.get("mode", "ideal")
    if mode not in MODES:
        errors.append(f"mode: must be one of {MODES}, got {mode!r}")

    graph, eta_scale = _parse_target(doc, errors)

    cavity = doc.get("cavity", {})
    beta = _as_complex(cavity.get("beta", 0.0), errors, "cavity.beta")
    xi = _as_complex(cavity.get("xi", 0.0), errors, "cavity.xi")
    n_max = cavity.get("n_max", 40)
    if not isinstance(n_max, int) or n_max < 1:
        errors.append("cavity.n_max: must be a positive integer")
        n_max = 40
    load = abs(beta) ** 2 + np.sinh(abs(xi)) ** 2
    if load >= 0.5 * n_max:
        errors.append(
            f"cavity: truncation inadequate, |beta|^2 + sinh^2|xi| = {load:.3f} "
            f">= 0.5 * n_max = {0.5 * n_max}"
        )

    init = doc.get("initial_qubit_state", {})
    weights = None
    basis = None
    if "eigenstate_weights" in init:
        weights = tuple(_as_complex(w, errors, "initial_qubit_state.eigenstate_weights")
                        for w in init["eigenstate_weights"])
        if graph is not None and len(weights) != 2**graph.n_sites:
            errors.append(
                f"initial_qubit_state.eigenstate_weights: need "
                f"{2**graph.n_sites} entries, got {len(weights)}"
            )
    elif "basis" in init:
        basis = str(init["basis"])
        if graph is not None and (len(basis) != graph.n_sites or set(basis) - set("01")):
            errors.append(f"initial_qubit_state.basis: invalid string {basis!r}")
    else:
        errors.append("initial_qubit_state: needs 'eigenstate_weights' or 'basis'")

    times_s = doc.get("times_s")
    eta_times = doc.get("eta_times")
    if (times_s is None) == (eta_times is None):
        errors.append("exactly one of 'times_s' or 'eta_times' must be given")
        times = ()
    elif times_s is not None:
        times = tuple(float(t) for t in times_s)
    else:
        if not eta_scale:
            errors.append("eta_times requires a target with a non-zero coupling")
            times = ()
        else:
            times = tuple(float(x) / eta_scale for x in eta_times)
    if times and (any(t < 0 for t in times) or list(times) != sorted(times)):
        errors.append("times must be non-negative and ascending")

    tomo = doc.get("tomography", {})
    radius = float(tomo.get("radius", abs(beta)))
    if radius <= 0:
        errors.append("tomography.radius: must be positive (set cavity.beta or radius)")
        radius = 1.0
    n_theta = int(tomo.get("n_theta", 720))
    if n_theta < 64:
        errors.append("tomography.n_theta: must be >= 64")
    grid_extent = float(tomo.get("grid_extent", abs(beta) + 4.0))
    grid_step = float(tomo.get("grid_step", 0.1))
    if grid_step <= 0 or grid_extent <= 0:
        errors.append("tomography grid extent and step must be positive")
    wigner_n_max = tomo.get("wigner_n_max")
    if wigner_n_max is not None and (not isinstance(wigner_n_max, int) or wigner_n_max < n_max):
        errors.append("tomography.wigner_n_max: must be an integer >= cavity.n_max")
    min_prominence = float(tomo.get("min_prominence", 0.02))
    emit_grids = bool(tomo.get("emit_grids", True))

    phys = doc.get("physical", {})
    g = TWO_PI * float(phys.get("g_hz", 1e7))
    delta = TWO_PI * float(phys.get("delta_hz", 1e9))
    coupler_delta_hz = phys.get("coupler_delta_hz")
    # Default couplers to the opposite side of the cavity: putting them at the
    # target frequency would make the J exchange resonant and drain the
    # targets into the couplers.
    coupler_delta = TWO_PI * float(coupler_delta_hz) if coupler_delta_hz is not None else -delta
    omega_c = TWO_PI * float(phys.get("omega_c_hz", 5e9))
    ratios = tuple(float(r) for r in phys.get("hierarchy_ratios", DEFAULT_HIERARCHY_RATIOS))
    if mode in ("engineered", "full"):
        if g == 0 or delta == 0:
            errors.append("physical.g_hz and physical.delta_hz must be non-zero")
        if graph is not None and graph.local_z is not None and any(graph.local_z):
            errors.append(
                "engineered/full modes realize pure XY targets; target.graph.local_z_hz "
                "must be absent or zero"
            )

    reference = doc.get("reference")
    if reference not in (None, "ideal"):
        errors.append(f"reference: must be null or 'ideal', got {reference!r}")
    if reference == "ideal" and mode == "ideal":
        reference = None

    if errors:
        raise ConfigError("invalid configuration:\n" + "\n".join(f"  - {e}" for e in errors))

    return ExperimentConfig(
        mode=mode,
        graph=graph,
        beta=beta,
        xi=xi,
        n_max=n_max,
        eigenstate_weights=weights,
        basis=basis,
        times_s=times,
        radius=radius,
        n_theta=n_theta,
        grid_extent=grid_extent,
        grid_step=grid_step,
        wigner_n_max=wigner_n_max,
        min_prominence=min_prominence,
        emit_grids=emit_grids,
        g=g,
        delta=delta,
        coupler_delta=coupler_delta,
        omega_c=omega_c,
        hierarchy_ratios=ratios,
        reference=reference,
        strict=bool(doc.get("strict", False)),
        raw=copy.deepcopy(doc),
    )


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON configuration file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


def apply_overrides(doc: dict, overrides) -> dict:
    """Apply 'dotted.path=json-value' CLI overrides to a raw config document."""
    doc = copy.deepcopy(doc)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key.path=value")
        path, _, raw_value = item.partition("=")
        try:
            value = json.loads(raw_value)
        except json.JSONDecodeError:
            value = raw_value  # bare strings are allowed
        node = doc
        keys = path.split(".")
        for key in keys[:-1]:
            node = node.setdefault(key, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {item!r} descends into a non-object")
        node[keys[-1]] = value
    return doc
