"""Fock-space operators and squeezed coherent states checked against the
closed-form Gaussian-state expressions."""

import math

import numpy as np
import pytest

from aqpe.states import (
    SqueezedCoherentSpec,
    basis_register,
    displacement,
    eigenstate_superposition,
    embed_qubit_op,
    ladder_ops,
    mean_photon_number,
    rotate_gaussian,
    squeeze,
    squeezed_coherent,
    truncation_convergence,
    SIGMA_X,
    SIGMA_Z,
)
from aqpe.linalg import eig_hermitian, kron_all

N_MAX = 60


def quad_ops(n_max):
    a, adag, _ = ladder_ops(n_max)
    return (a + adag) / 2, (a - adag) / (2j)


def variance(psi, op):
    mean = np.vdot(psi, op @ psi).real
    return np.vdot(psi, op @ op @ psi).real - mean**2


def test_ladder_commutator_in_bulk():
    a, adag, n_op = ladder_ops(20)
    comm = a @ adag - adag @ a
    assert np.allclose(comm[:20, :20], np.eye(21)[:20, :20])
    assert comm[20, 20].real == pytest.approx(-20)  # truncation corner
    assert np.allclose(adag @ a, n_op)


def test_displacement_is_unitary_and_inverts():
    d = displacement(0.7 - 0.3j, N_MAX)
    assert np.abs(d.conj().T @ d - np.eye(N_MAX + 1)).max() < 1e-10
    assert np.abs(displacement(-(0.7 - 0.3j), N_MAX) - d.conj().T).max() < 1e-10


def test_coherent_state_statistics():
    beta = 1.2 + 0.5j
    psi = squeezed_coherent(SqueezedCoherentSpec(beta, 0.0, N_MAX))
    a, _, n_op = ladder_ops(N_MAX)
    assert abs(np.vdot(psi, a @ psi) - beta) < 1e-10
    assert abs(np.vdot(psi, n_op @ psi).real - abs(beta) ** 2) < 1e-9
    # Poisson photon distribution.
    probs = np.abs(psi) ** 2
    ns = np.arange(8)
    expected = np.exp(-abs(beta) ** 2) * abs(beta) ** (2 * ns) / [
        math.factorial(int(k)) for k in ns
    ]
    assert np.abs(probs[:8] - expected).max() < 1e-10


def test_coherent_overlap_gaussian():
    rng = np.random.default_rng(23)
    for _ in range(4):
        alpha = rng.normal() + 1j * rng.normal()
        beta = rng.normal() + 1j * rng.normal()
        pa = squeezed_coherent(SqueezedCoherentSpec(alpha, 0.0, N_MAX))
        pb = squeezed_coherent(SqueezedCoherentSpec(beta, 0.0, N_MAX))
        assert abs(abs(np.vdot(pa, pb)) ** 2 - np.exp(-abs(alpha - beta) ** 2)) < 1e-8


def test_squeezed_vacuum_quadrature_variances():
    r = 0.5
    x, p = quad_ops(N_MAX)
    psi_plus = squeezed_coherent(SqueezedCoherentSpec(0.0, r, N_MAX))
    psi_minus = squeezed_coherent(SqueezedCoherentSpec(0.0, -r, N_MAX))
    # Positive real xi squeezes x, negative real xi squeezes p.
    assert abs(variance(psi_plus, x) - np.exp(-2 * r) / 4) < 1e-10
    assert abs(variance(psi_plus, p) - np.exp(2 * r) / 4) < 1e-10
    assert abs(variance(psi_minus, p) - np.exp(-2 * r) / 4) < 1e-10


def test_mean_photon_number_analytic():
    spec = SqueezedCoherentSpec(1.8, -0.4, N_MAX)
    psi = squeezed_coherent(spec)
    _, _, n_op = ladder_ops(N_MAX)
    assert abs(np.vdot(psi, n_op @ psi).real - mean_photon_number(spec)) < 1e-8


def test_rotate_gaussian_matches_phase_rotation_operator():
    spec = SqueezedCoherentSpec(0.9, -0.3, N_MAX)
    theta = 0.7
    _, _, n_op = ladder_ops(N_MAX)
    rotated_op = np.exp(1j * theta * np.diag(n_op).real)[:, None] * squeezed_coherent(
        spec
    ).reshape(-1, 1)
    rotated_param = squeezed_coherent(rotate_gaussian(spec, theta))
    overlap = abs(np.vdot(rotated_op.ravel(), rotated_param))
    assert abs(overlap - 1.0) < 1e-10


def test_spec_rejects_inadequate_truncation():
    with pytest.raises(ValueError, match="truncation inadequate"):
        SqueezedCoherentSpec(4.0, 0.0, 20)


def test_truncation_convergence_small_for_adequate_n_max():
    fine = truncation_convergence(SqueezedCoherentSpec(1.8, -0.4, 40))
    assert fine < 1e-4
    # Marginal truncation converges noticeably worse.
    coarse = truncation_convergence(SqueezedCoherentSpec(1.8, -0.4, 8))
    assert coarse > 100 * fine


def test_embed_qubit_op_placement():
    got = embed_qubit_op(SIGMA_X, 1, 3)
    expected = kron_all(np.eye(2), SIGMA_X, np.eye(2))
    assert np.allclose(got, expected)
    with pytest.raises(ValueError):
        embed_qubit_op(SIGMA_X, 3, 3)


def test_basis_register_indexing():
    reg = basis_register("01")
    assert reg.n_qubits == 2
    assert reg.amplitudes[int("01", 2)] == 1.0
    # Index 0 carries sigma_z = +1, so '0' is the excited state.
    sz0 = embed_qubit_op(SIGMA_Z, 0, 2)
    assert np.vdot(reg.amplitudes, sz0 @ reg.amplitudes).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        basis_register("0x1")


def test_eigenstate_superposition_populations():
    rng = np.random.default_rng(31)
    h = rng.normal(size=(4, 4))
    h = (h + h.T) / 2
    eig = eig_hermitian(h.astype(complex))
    reg = eigenstate_superposition(eig, [1, 1, 0, 0])
    amps = eig.eigenvectors.conj().T @ reg.amplitudes
    assert np.allclose(np.abs(amps) ** 2, [0.5, 0.5, 0, 0], atol=1e-12)
    with pytest.raises(ValueError):
        eigenstate_superposition(eig, [0, 0, 0, 0])
