"""Bosonic operators and states on a truncated Fock space, plus multi-qubit
register construction.

The Fock truncation keeps levels |0> .. |n_max|, so matrices have dimension
n_max + 1.  The squeezing convention is S(xi) = exp[(xi* a^2 - xi a^dag^2)/2]
with vacuum quadrature variance 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .linalg import HermitianEigen, kron

# Pauli and ladder operators on a single qubit; basis index 0 carries
# sigma_z = +1 (excited), index 1 is the ground state.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def ladder_ops(n_max: int):
    """Annihilation, creation and number operators on |0> .. |n_max>.

    The commutator [a, a^dag] equals the identity on the subspace n < n_max;
    the (n_max, n_max) corner carries the truncation artifact -n_max.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = n_max + 1
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a, a.conj().T, np.diag(np.arange(dim, dtype=complex))


def displacement(beta: complex, n_max: int) -> np.ndarray:
    """D(beta) = exp(beta a^dag - beta* a) by dense matrix exponential."""
    a, adag, _ = ladder_ops(n_max)
    return expm(beta * adag - np.conj(beta) * a)


def squeeze(xi: complex, n_max: int) -> np.ndarray:
    """S(xi) = exp[(xi* a^2 - xi a^dag^2) / 2] by dense matrix exponential."""
    a, adag, _ = ladder_ops(n_max)
    return expm((np.conj(xi) * (a @ a) - xi * (adag @ adag)) / 2)


@dataclass(frozen=True)
class SqueezedCoherentSpec:
    """Displacement/squeezing parameters of a cavity state D(beta)S(xi)|vac>."""

    beta: complex
    xi: complex
    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        load = abs(self.beta) ** 2 + np.sinh(abs(self.xi)) ** 2
        if load >= 0.5 * self.n_max:
            raise ValueError(
                f"truncation inadequate: |beta|^2 + sinh^2|xi| = {load:.3f} "
                f"must stay below 0.5 * n_max = {0.5 * self.n_max}"
            )


def squeezed_coherent(spec: SqueezedCoherentSpec) -> np.ndarray:
    """Unit-norm state vector D(beta) S(xi) |0>."""
    dim = spec.n_max + 1
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    psi = displacement(spec.beta, spec.n_max) @ (squeeze(spec.xi, spec.n_max) @ vac)
    return psi / np.linalg.norm(psi)


def rotate_gaussian(spec: SqueezedCoherentSpec, theta: float) -> SqueezedCoherentSpec:
    """Phase-space rotation exp(i theta n): beta -> beta e^{i theta},
    xi -> xi e^{i 2 theta}, exact up to a global phase of the state."""
    return replace(
        spec,
        beta=spec.beta * np.exp(1j * theta),
        xi=spec.xi * np.exp(2j * theta),
    )


def mean_photon_number(spec: SqueezedCoherentSpec) -> float:
    """Analytic <n> = |beta|^2 + sinh^2 |xi| of a squeezed coherent state."""
    return abs(spec.beta) ** 2 + float(np.sinh(abs(spec.xi)) ** 2)


def truncation_convergence(spec: SqueezedCoherentSpec) -> float:
    """Norm distance between the state at n_max and at 2 * n_max.

    The doubled-truncation vector is the reference; the coarse vector is
    zero-padded before comparison.  Small values certify convergence.
    """
    fine = squeezed_coherent(replace(spec, n_max=2 * spec.n_max))
    coarse = np.zeros_like(fine)
    coarse[: spec.n_max + 1] = squeezed_coherent(spec)
    # Align global phase before differencing.
    overlap = np.vdot(fine, coarse)
    if abs(overlap) > 0:
        coarse = coarse * (np.conj(overlap) / abs(overlap))
    return float(np.linalg.norm(fine - coarse))


def embed_qubit_op(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """I x ... x op x ... x I with op at ``site`` (site 0 = leftmost factor)."""
    if not 0 <= site < n_qubits:
        raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    out = np.eye(1, dtype=complex)
    for k in range(n_qubits):
        out = kron(out, op if k == site else IDENTITY_2)
    return out


@dataclass(frozen=True)
class QubitRegisterState:
    """Pure state of an n-qubit register in the computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        if amp.shape != (2**self.n_qubits,):
            raise ValueError("amplitude vector length must be 2**n_qubits")
        if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
            raise ValueError("amplitudes must be unit norm")


def eigenstate_superposition(eig: HermitianEigen, weights) -> QubitRegisterState:
    """Normalized sum_j w_j |e_j> over the eigenvector columns of ``eig``."""
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (eig.dim,):
        raise ValueError(f"need {eig.dim} weights, got {weights.shape}")
    norm = np.linalg.norm(weights)
    if norm == 0:
        raise ValueError("weight vector must be non-zero")
    psi = eig.eigenvectors @ (weights / norm)
    n_qubits = int(np.log2(eig.dim))
    if 2**n_qubits != eig.dim:
        raise ValueError("eigenbasis dimension is not a power of two")
    return QubitRegisterState(n_qubits=n_qubits, amplitudes=psi)


def basis_register(bits: str) -> QubitRegisterState:
    """Computational basis state from a bit string, e.g. '01'."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"invalid basis string {bits!r}")
    n = len(bits)
    amp = np.zeros(2**n, dtype=complex)
    amp[int(bits, 2)] = 1.0
    return QubitRegisterState(n_qubits=n, amplitudes=amp)
