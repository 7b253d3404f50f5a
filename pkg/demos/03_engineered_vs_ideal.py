"""Engineering the XY coupling from physical circuit parameters.

A target exchange strength eta is realized dispersively through coupler
qubits: the cross coupling J_m is solved from eta, and the local couplings
J_l are chosen at the root that nulls the parasitic longitudinal field.
The engineered pipeline is then compared against the ideal one through the
cavity-state Uhlmann fidelity over two rotation periods.
"""

import warnings

import numpy as np

from aqpe import HierarchyWarning, solve_zero_lambda, two_qubit_preset
from aqpe.config import parse_config
from aqpe.pipeline import fig4_config_doc, run_experiment

TWO_PI = 2 * np.pi
ETA_HZ = 1e4
G_HZ = 1e7
DELTA_HZ = 1e9

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    layout, coeffs = two_qubit_preset(TWO_PI * ETA_HZ, TWO_PI * G_HZ, TWO_PI * DELTA_HZ)

print("solved couplings (linear Hz):")
print(f"  J_m   = {layout.j_cross[0] / TWO_PI:12.4e}")
print(f"  J_l   = {layout.j_local[0] / TWO_PI:12.4e}")
roots = solve_zero_lambda([layout.j_cross[0]])
print(f"  J_l roots = {roots[0] / TWO_PI:.4e}, {roots[1] / TWO_PI:.4e}")
print(f"  eta_eng   = {coeffs.eta_eng[0] / TWO_PI:12.4e}  (requested {ETA_HZ:.1e})")
print(f"  lambda    = {max(abs(l) for l in coeffs.lambda_eng) / TWO_PI:.3e}  (nulled)")

r1, r2 = layout.hierarchy_ratios()
print(f"\nhierarchy ratios: |Delta|/max|J| = {r1:.2f}, min|J|/|g| = {r2:.2f}")
for w in caught:
    print(f"  warning: {w.message}")

# Evolve both pipelines on a shared time grid and compare.
doc = fig4_config_doc(eta_hz=ETA_HZ, g_hz=G_HZ, delta_hz=DELTA_HZ, n_theta=360)
doc["tomography"]["emit_grids"] = False
config = parse_config(doc)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", HierarchyWarning)
    manifest = run_experiment(config, "demo-out/engineered", artifacts=("fidelity",))

print(f"\nminimum engineered-vs-ideal cavity fidelity over eta*t in [0, 2]: "
      f"{manifest.derived['min_fidelity']:.6f}")
print("fidelity series written to demo-out/engineered/fidelity.csv")
