"""Diagnosing the dispersive approximation with the full physical model.

The lab-frame Hamiltonian (cavity, target qubits, couplers, exchange and
Jaynes-Cummings couplings) is evolved exactly on a truncated Fock space.
After rotating out the bare frequencies and projecting onto the
coupler-ground subspace, the reduced cavity state can be compared with the
ideal dispersive picture.  The default parameter profile sits deliberately
at the edge of the dispersive hierarchy, so the coupler leakage and the
fidelity loss it causes are clearly visible.
"""

import json
import warnings

import numpy as np

from aqpe import HierarchyWarning
from aqpe.config import parse_config
from aqpe.pipeline import fig4_config_doc, run_experiment

doc = fig4_config_doc(n_theta=256)
doc["mode"] = "full"
doc["cavity"]["n_max"] = 12  # 7 qubits ride along, keep the cavity modest
doc["eta_times"] = [0.0, 0.5, 1.0]
doc["tomography"]["emit_grids"] = False
doc["tomography"]["min_prominence"] = 0.05  # ignore small truncation ripples

config = parse_config(doc)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", HierarchyWarning)
    manifest = run_experiment(config, "demo-out/full")

ratios = manifest.derived["engineered"]["hierarchy_ratios"]
print(f"hierarchy ratios: |Delta|/max|J| = {ratios[0]:.2f}, "
      f"min|J|/|g| = {ratios[1]:.2f}  (both should be >> 10)")

print(f"\n{'eta*t':>6} {'coupler leakage':>16}")
for eta_t, leak in zip(doc["eta_times"], manifest.derived["coupler_leakage"]):
    print(f"{eta_t:6.2f} {leak:16.3e}")

print(f"\nmin cavity fidelity vs ideal: {manifest.derived['min_fidelity']:.4f}")

est = json.loads(open("demo-out/full/estimates.json", encoding="utf-8").read())
for entry in est["estimates"]:
    if "invalid" in entry:
        print(f"t = {entry['time_s']:.2e} s: no valid estimate ({entry['invalid']})")
    else:
        energies = np.array([p["energy_rad_per_s"] for p in entry["peaks"]])
        print(f"t = {entry['time_s']:.2e} s: estimated energies / 2pi = "
              f"{np.round(energies / (2 * np.pi), 1)}")

print("\nAt these edge-of-validity parameters the couplers hybridize with")
print("the targets, and the coupler-induced cavity frequency shift drags")
print("every peak; tightening the hierarchy (smaller g and eta) restores")
print("the dispersive picture.")
