"""Dense complex linear algebra for small composite quantum systems.

Conventions used throughout the package:

* hbar = 1; every energy is an angular frequency in rad/s, every time is in
  seconds.  Unit conversions happen only at I/O boundaries.
* Operators and states are plain complex numpy arrays in row-major layout.
* Composite systems are ordered cavity first, then qubits in ascending site
  index; ``CompositeSpace`` records the subsystem dimensions.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

# Guard against runaway tensor products; desk-scale problems stay well below this.
MAX_TOTAL_DIM = 1 << 16

# Density-matrix validity gates (see uhlmann_fidelity).
_TRACE_TOL = 1e-9
_EIG_FLOOR = -1e-10


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered subsystem dimensions of a tensor-product Hilbert space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition H = V diag(w) V^dag with w ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def hermitianize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (A + A^dag) / 2."""
    return (a + a.conj().T) / 2


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with a total-dimension guard."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    total = a.shape[0] * b.shape[0] * a.shape[-1] * b.shape[-1]
    if total > MAX_TOTAL_DIM**2:
        raise ValueError(
            f"kron result dimension {a.shape[0] * b.shape[0]} exceeds the "
            f"configured maximum {MAX_TOTAL_DIM}; truncation is likely runaway"
        )
    return np.kron(a, b)


def kron_all(*ops: np.ndarray) -> np.ndarray:
    """Left-fold Kronecker product of a sequence of operators."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = kron(out, op)
    return out


def partial_trace(rho: np.ndarray, space: CompositeSpace, keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` is an iterable of subsystem indices into ``space.dims``; the
    result is ordered by ascending kept index.  Trace and Hermiticity are
    preserved exactly up to rounding.
    """
    rho = np.asarray(rho, dtype=complex)
    keep = sorted(set(int(k) for k in keep))
    n = space.n_subsystems
    if not keep:
        raise ValueError("keep set must be non-empty")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    d = space.total_dim
    if rho.shape != (d, d):
        raise ValueError(f"rho shape {rho.shape} does not match space dims {space.dims}")

    letters = string.ascii_letters
    if 2 * n > len(letters):
        raise ValueError("too many subsystems for einsum-based partial trace")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]  # contract traced subsystems
    out_idx = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    spec = "".join(row) + "".join(col) + "->" + out_idx
    reshaped = rho.reshape(space.dims + space.dims)
    d_keep = int(np.prod([space.dims[k] for k in keep]))
    return np.einsum(spec, reshaped).reshape(d_keep, d_keep)


def eig_hermitian(h: np.ndarray) -> HermitianEigen:
    """Eigendecompose a Hermitian matrix; gates on Hermiticity first."""
    h = np.asarray(h, dtype=complex)
    scale = np.abs(h).max()
    if scale > 0 and np.abs(h - h.conj().T).max() > 1e-9 * scale:
        raise ValueError("matrix fails the Hermiticity gate ||H - H^dag|| < 1e-9 ||H||")
    w, v = np.linalg.eigh(h)
    return HermitianEigen(eigenvalues=w, eigenvectors=v)


def propagator(eig: HermitianEigen, t: float) -> np.ndarray:
    """Unitary exp(-i H t) from a cached eigendecomposition (hbar = 1)."""
    if not np.isfinite(t):
        raise ValueError("propagation time must be finite")
    v = eig.eigenvectors
    phase = np.exp(-1j * eig.eigenvalues * t)
    return (v * phase) @ v.conj().T


def propagate(h: np.ndarray, t: float) -> np.ndarray:
    """Convenience wrapper: eigendecompose and exponentiate in one call."""
    return propagator(eig_hermitian(h), t)


def _check_density(rho: np.ndarray, name: str) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    scale = max(np.abs(rho).max(), 1.0)
    if np.abs(rho - rho.conj().T).max() > 1e-9 * scale:
        raise ValueError(f"{name} is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > _TRACE_TOL:
        raise ValueError(f"{name} trace {tr} deviates from 1 beyond {_TRACE_TOL}")
    w = np.linalg.eigvalsh(hermitianize(rho))
    if w.min() < _EIG_FLOOR:
        raise ValueError(f"{name} has eigenvalue {w.min()} below the {_EIG_FLOOR} floor")
    return rho


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitianize(rho))
    w = np.clip(w, 0.0, None)  # truncation noise may leave tiny negatives
    return (v * np.sqrt(w)) @ v.conj().T


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho = _check_density(rho, "rho")
    sigma = _check_density(sigma, "sigma")
    sq = _psd_sqrt(rho)
    inner = hermitianize(sq @ sigma @ sq)
    w = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    f = float(np.sum(np.sqrt(w)) ** 2)
    return min(max(f, 0.0), 1.0)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Trace distance (1/2) ||rho - sigma||_1 for Hermitian arguments."""
    w = np.linalg.eigvalsh(hermitianize(np.asarray(rho) - np.asarray(sigma)))
    return 0.5 * float(np.sum(np.abs(w)))
