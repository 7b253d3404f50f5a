"""Analog quantum phase estimation simulator.

Eigenenergies of a multi-qubit target Hamiltonian are encoded as
photon-number-conditioned phase-space rotations of a cavity mode and read
out from angular profiles of the cavity Wigner function.

Internal units: hbar = 1, energies in rad/s, times in seconds.  Configured
frequencies are linear Hz and multiplied by 2*pi on ingestion.
"""

from .errors import AcceptanceError, ConfigError, HierarchyWarning, TruncationError
from .evolution import (
    EvolutionTrace,
    SpectrumPopulations,
    evolve_series,
    fidelity_series,
    ideal_cavity_analytic,
    reduced_series,
    spectrum_populations,
    to_rotating_frame,
)
from .hamiltonians import (
    EngineeredCoeffs,
    PhysicalLayout,
    XYGraph,
    build_aqpe,
    build_full,
    build_xy_target,
    check_hierarchy,
    engineered_coeffs,
    engineered_target_graph,
    solve_zero_lambda,
    total_excitation_number,
    two_qubit_preset,
)
from .linalg import (
    CompositeSpace,
    HermitianEigen,
    eig_hermitian,
    kron,
    kron_all,
    partial_trace,
    propagate,
    propagator,
    trace_distance,
    uhlmann_fidelity,
)
from .states import (
    QubitRegisterState,
    SqueezedCoherentSpec,
    basis_register,
    displacement,
    eigenstate_superposition,
    embed_qubit_op,
    ladder_ops,
    rotate_gaussian,
    squeeze,
    squeezed_coherent,
    truncation_convergence,
)
from .tomography import (
    AngularProfile,
    SpectralEstimate,
    WignerGrid,
    angular_profile,
    default_grid_axes,
    detect_peaks,
    estimate_spectrum,
    wigner,
    wigner_points,
)

__version__ = "0.1.0"
