"""Time propagation of composite cavity-qubit states, frame transformations,
the analytic rotated-mixture cavity oracle, and fidelity time series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    CompositeSpace,
    HermitianEigen,
    eig_hermitian,
    partial_trace,
    uhlmann_fidelity,
)
from .states import QubitRegisterState, SqueezedCoherentSpec, rotate_gaussian, squeezed_coherent


@dataclass(frozen=True)
class EvolutionTrace:
    """States sampled along a unitary evolution on a fixed composite space."""

    times: np.ndarray
    states: tuple  # state vectors, one per time
    space: CompositeSpace

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) != times.shape[0]:
            raise ValueError("times and states must have equal length")
        for psi in self.states:
            if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
                raise ValueError("trace states must be unit norm to 1e-9")


@dataclass(frozen=True)
class SpectrumPopulations:
    """Eigenenergies paired with initial-state populations."""

    energies: np.ndarray  # rad/s
    populations: np.ndarray  # sums to 1

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        p = np.asarray(self.populations, dtype=float)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "populations", p)
        if e.shape != p.shape:
            raise ValueError("energies and populations must match in length")
        if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError("populations must be non-negative and sum to 1")


def spectrum_populations(eig: HermitianEigen, register: QubitRegisterState) -> SpectrumPopulations:
    """Populations p_j = |<e_j|psi>|^2 of a register state in an eigenbasis."""
    amps = eig.eigenvectors.conj().T @ register.amplitudes
    return SpectrumPopulations(energies=eig.eigenvalues, populations=np.abs(amps) ** 2)


def evolve_series(h: np.ndarray, psi0: np.ndarray, times, space: CompositeSpace) -> EvolutionTrace:
    """Propagate psi0 under exp(-i h t) at each time, reusing one
    eigendecomposition of h for the whole series."""
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (space.total_dim,):
        raise ValueError("state dimension does not match the composite space")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be unit norm")
    eig = eig_hermitian(h)  # raises on non-Hermitian input
    coeffs = eig.eigenvectors.conj().T @ psi0
    states = []
    for t in np.asarray(times, dtype=float):
        states.append(eig.eigenvectors @ (np.exp(-1j * eig.eigenvalues * t) * coeffs))
    return EvolutionTrace(times=np.asarray(times, dtype=float), states=states, space=space)


def ideal_cavity_analytic(
    sp: SpectrumPopulations, cavity0: SqueezedCoherentSpec, t: float
) -> np.ndarray:
    """Closed-form reduced cavity state after dispersive evolution: a mixture
    of the initial squeezed coherent state rotated by -E_j t per eigenenergy,
    weighted by the initial populations."""
    dim = cavity0.n_max + 1
    rho = np.zeros((dim, dim), dtype=complex)
    for energy, pop in zip(sp.energies, sp.populations):
        if pop == 0.0:
            continue
        psi = squeezed_coherent(rotate_gaussian(cavity0, -energy * t))
        rho += pop * np.outer(psi, psi.conj())
    return rho


def to_rotating_frame(trace: EvolutionTrace, h0: np.ndarray) -> EvolutionTrace:
    """Apply exp(+i h0 t_i) to every state; h0 must be diagonal in the
    computational/Fock product basis (conservative gate)."""
    h0 = np.asarray(h0, dtype=complex)
    diag = np.diag(h0)
    scale = max(np.abs(h0).max(), 1.0)
    if np.abs(h0 - np.diag(diag)).max() > 1e-12 * scale:
        raise ValueError("frame generator must be diagonal in the product basis")
    states = [
        np.exp(1j * diag.real * t) * psi for t, psi in zip(trace.times, trace.states)
    ]
    return EvolutionTrace(times=trace.times, states=states, space=trace.space)


def reduced_series(trace: EvolutionTrace, keep) -> list[np.ndarray]:
    """Partial trace of every state in the trace onto the kept subsystems."""
    out = []
    for psi in trace.states:
        rho = np.outer(psi, psi.conj())
        out.append(partial_trace(rho, trace.space, keep))
    return out


def fidelity_series(a: EvolutionTrace, b: EvolutionTrace, keep):
    """Pointwise Uhlmann fidelity between the reduced states of two traces."""
    if a.times.shape != b.times.shape or not np.allclose(a.times, b.times, rtol=0, atol=0):
        raise ValueError("traces must share an identical time grid")
    rho_a = reduced_series(a, keep)
    rho_b = reduced_series(b, keep)
    fids = np.array([uhlmann_fidelity(x, y) for x, y in zip(rho_a, rho_b)])
    return a.times, fids
