"""Linear algebra layer: tensor products, partial traces, propagators and
state distance measures checked against hand-built references."""

import numpy as np
import pytest
from scipy.linalg import expm

from aqpe.linalg import (
    CompositeSpace,
    eig_hermitian,
    hermitianize,
    kron,
    kron_all,
    partial_trace,
    propagate,
    propagator,
    trace_distance,
    uhlmann_fidelity,
)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hermitianize(a)


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_composite_space_dims():
    space = CompositeSpace((3, 2, 2))
    assert space.total_dim == 12
    assert space.n_subsystems == 3
    with pytest.raises(ValueError):
        CompositeSpace((3, 1))


def test_kron_matches_numpy():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(2, 2))
    assert np.allclose(kron(a, b), np.kron(a, b))
    c = rng.normal(size=(2, 2))
    assert np.allclose(kron_all(a, b, c), np.kron(np.kron(a, b), c))


def test_kron_dimension_guard():
    big = np.eye(512)
    with pytest.raises(ValueError, match="runaway"):
        kron(big, np.eye(256))


def test_partial_trace_product_state():
    rng = np.random.default_rng(11)
    rho_a = random_density(rng, 3)
    rho_b = random_density(rng, 2)
    space = CompositeSpace((3, 2))
    rho = kron(rho_a, rho_b)
    assert np.allclose(partial_trace(rho, space, [0]), rho_a, atol=1e-13)
    assert np.allclose(partial_trace(rho, space, [1]), rho_b, atol=1e-13)
    assert np.allclose(partial_trace(rho, space, [0, 1]), rho)


def test_partial_trace_bell_state_is_maximally_mixed():
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    reduced = partial_trace(rho, CompositeSpace((2, 2)), [0])
    assert np.allclose(reduced, np.eye(2) / 2, atol=1e-14)


def test_partial_trace_three_subsystems_ordering():
    rng = np.random.default_rng(3)
    parts = [random_density(rng, d) for d in (2, 3, 2)]
    space = CompositeSpace((2, 3, 2))
    rho = kron_all(*parts)
    got = partial_trace(rho, space, [0, 2])
    assert np.allclose(got, kron(parts[0], parts[2]), atol=1e-13)


def test_partial_trace_input_validation():
    space = CompositeSpace((2, 2))
    rho = np.eye(4) / 4
    with pytest.raises(ValueError):
        partial_trace(rho, space, [])
    with pytest.raises(ValueError):
        partial_trace(rho, space, [2])
    with pytest.raises(ValueError):
        partial_trace(np.eye(3), space, [0])


def test_eig_hermitian_gates_on_hermiticity():
    with pytest.raises(ValueError, match="Hermiticity"):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_propagator_matches_expm():
    rng = np.random.default_rng(21)
    for _ in range(5):
        h = random_hermitian(rng, 6)
        t = rng.uniform(0.1, 3.0)
        u = propagate(h, t)
        assert np.abs(u - expm(-1j * h * t)).max() < 1e-11
        assert np.abs(u.conj().T @ u - np.eye(6)).max() < 1e-12


def test_propagator_composes():
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 5)
    eig = eig_hermitian(h)
    u1 = propagator(eig, 0.4)
    u2 = propagator(eig, 1.1)
    assert np.allclose(u1 @ u2, propagator(eig, 1.5), atol=1e-12)
    with pytest.raises(ValueError):
        propagator(eig, np.inf)


def test_uhlmann_fidelity_pure_states():
    rng = np.random.default_rng(13)
    for _ in range(5):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        phi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        phi /= np.linalg.norm(phi)
        f = uhlmann_fidelity(np.outer(psi, psi.conj()), np.outer(phi, phi.conj()))
        assert abs(f - abs(np.vdot(psi, phi)) ** 2) < 1e-7


def test_uhlmann_fidelity_bounds_and_symmetry():
    rng = np.random.default_rng(17)
    rho = random_density(rng, 4)
    sigma = random_density(rng, 4)
    assert abs(uhlmann_fidelity(rho, rho) - 1.0) < 1e-10
    f_ab = uhlmann_fidelity(rho, sigma)
    f_ba = uhlmann_fidelity(sigma, rho)
    assert 0.0 <= f_ab <= 1.0
    assert abs(f_ab - f_ba) < 1e-10


def test_uhlmann_fidelity_rejects_invalid_density():
    with pytest.raises(ValueError, match="trace"):
        uhlmann_fidelity(np.eye(2), np.eye(2) / 2)


def test_trace_distance_orthogonal_and_equal():
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    assert abs(trace_distance(p0, p1) - 1.0) < 1e-14
    assert trace_distance(p0, p0) < 1e-14
