"""Wigner-function readout of cavity states.

Evaluation uses the displaced-parity form
W(alpha) = (2/pi) sum_n (-1)^n <n| D(alpha)^dag rho D(alpha) |n>,
with one displacement per phase-space point.  Displacements reuse a cached
eigendecomposition of the real-line generator i(a^dag - a): D(alpha) for
alpha = r e^{i phi} is the real displacement D(r) conjugated by the Fock
phase e^{i phi n}, so every point costs two dense matrix products.

Accuracy is set by truncation, which is gated explicitly: the state displaced
to the farthest evaluated point must leave less than 1e-6 probability in the
top five Fock levels.  When no evaluation truncation is pinned by the caller,
the state is zero-padded (an exact embedding) until the gate passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .errors import TruncationError
from .states import ladder_ops

TAIL_TOLERANCE = 1e-6
_TAIL_LEVELS = 5


@dataclass(frozen=True)
class WignerGrid:
    """W(alpha) sampled on a Cartesian grid; values[i, j] = W(re[j] + i*im[i])."""

    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray
    n_max_eval: int

    def __post_init__(self):
        for axis in (self.re_axis, self.im_axis):
            if np.any(np.diff(axis) <= 0):
                raise ValueError("grid axes must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Wigner values must be finite")

    def integral(self) -> float:
        """Riemann-sum quadrature of W over the grid (should be close to 1)."""
        dx = float(self.re_axis[1] - self.re_axis[0])
        dy = float(self.im_axis[1] - self.im_axis[0])
        return float(self.values.sum() * dx * dy)


@dataclass(frozen=True)
class AngularProfile:
    """W along the circle |alpha| = radius on a uniform theta grid."""

    radius: float
    thetas: np.ndarray
    values: np.ndarray
    n_max_eval: int = 0

    def __post_init__(self):
        if len(self.thetas) != len(self.values):
            raise ValueError("thetas and values must have equal length")
        steps = np.diff(self.thetas)
        if np.abs(steps - steps[0]).max() > 1e-12:
            raise ValueError("theta grid must be uniform")


@dataclass(frozen=True)
class SpectralEstimate:
    """Peak angles converted to eigenenergies and population weights."""

    evolution_time: float
    thetas: np.ndarray
    energies: np.ndarray  # rad/s, inside the alias window (-pi/t, pi/t]
    weights: np.ndarray
    min_separation: float  # smallest cyclic peak spacing, rad

    def __post_init__(self):
        if self.weights.size and self.weights.sum() > 1.1:
            raise ValueError("estimated weights sum beyond the 1.1 slack bound")


_DISP_BASIS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _displacement_basis(dim: int):
    """Eigendecomposition of i(a^dag - a) so D(r) = V exp(-i r w) V^dag."""
    cached = _DISP_BASIS_CACHE.get(dim)
    if cached is None:
        a, adag, _ = ladder_ops(dim - 1)
        w, v = np.linalg.eigh(1j * (adag - a))
        cached = (w, v)
        _DISP_BASIS_CACHE[dim] = cached
    return cached


def _displacement_dense(alpha: complex, dim: int) -> np.ndarray:
    w, v = _displacement_basis(dim)
    r = abs(alpha)
    d_r = (v * np.exp(-1j * r * w)) @ v.conj().T
    if r == 0:
        return d_r
    phase = np.exp(1j * np.angle(alpha) * np.arange(dim))
    return phase[:, None] * d_r * phase.conj()[None, :]


def _pad_density(rho: np.ndarray, dim: int) -> np.ndarray:
    if rho.shape[0] == dim:
        return rho
    out = np.zeros((dim, dim), dtype=complex)
    out[: rho.shape[0], : rho.shape[0]] = rho
    return out


def _displaced_tail(rho: np.ndarray, alpha: complex) -> float:
    """Probability in the top Fock levels of D(alpha)^dag rho D(alpha)."""
    d = _displacement_dense(alpha, rho.shape[0])
    x = rho @ d
    pops = np.einsum("jn,jn->n", d.conj(), x).real
    return float(pops[-_TAIL_LEVELS:].sum())


def _resolve_truncation(rho: np.ndarray, alpha_far: complex, n_max_eval):
    """Pick (and gate) the evaluation truncation for a set of points."""
    dim0 = rho.shape[0]
    if n_max_eval is not None:
        dim = int(n_max_eval) + 1
        if dim < dim0:
            raise ValueError("evaluation truncation below the state's own truncation")
        rho_eval = _pad_density(rho, dim)
        tail = _displaced_tail(rho_eval, alpha_far)
        if tail > TAIL_TOLERANCE:
            raise TruncationError(
                f"displacement by |alpha| = {abs(alpha_far):.3f} leaves probability "
                f"{tail:.3e} > {TAIL_TOLERANCE:.0e} in the top {_TAIL_LEVELS} Fock "
                f"levels at n_max = {dim - 1}; increase the truncation"
            )
        return rho_eval

    # Auto mode: zero-pad from an analytic size guess, escalating if needed.
    _, _, n_op = ladder_ops(dim0 - 1)
    nbar = float(np.real(np.trace(rho @ n_op)))
    m = (np.sqrt(max(nbar, 0.0)) + abs(alpha_far)) ** 2
    dim = max(dim0, int(np.ceil(m + 8 * np.sqrt(m + 1) + 20)) + 1)
    for _ in range(4):
        rho_eval = _pad_density(rho, dim)
        if _displaced_tail(rho_eval, alpha_far) <= TAIL_TOLERANCE:
            return rho_eval
        dim = int(dim * 1.3) + 10
    raise TruncationError(
        f"could not satisfy the displaced-tail gate below n_max = {dim - 1} "
        f"for |alpha| = {abs(alpha_far):.3f}"
    )


def wigner_points(rho: np.ndarray, alphas, n_max_eval: int | None = None):
    """Evaluate W at arbitrary phase-space points.

    Returns (values, n_max_used).  ``n_max_eval`` pins the evaluation
    truncation (gate failures raise); None lets the evaluation pad the state
    automatically.
    """
    rho = np.asarray(rho, dtype=complex)
    alphas = np.asarray(alphas, dtype=complex).ravel()
    alpha_far = alphas[np.argmax(np.abs(alphas))]
    rho_eval = _resolve_truncation(rho, alpha_far, n_max_eval)
    dim = rho_eval.shape[0]
    parity = (-1.0) ** np.arange(dim)

    values = np.empty(alphas.shape[0])
    for i, alpha in enumerate(alphas):
        d = _displacement_dense(alpha, dim)
        x = rho_eval @ d
        diag = np.einsum("jn,jn->n", d.conj(), x)
        w_val = (2 / np.pi) * np.sum(parity * diag)
        if abs(w_val.imag) > 1e-10:
            raise TruncationError(
                f"Wigner value at alpha={alpha:.3f} has imaginary residue "
                f"{w_val.imag:.3e}; the input is not a valid truncated density matrix"
            )
        values[i] = w_val.real
    return values, dim - 1


def wigner(rho: np.ndarray, re_axis, im_axis, n_max_eval: int | None = None) -> WignerGrid:
    """W on a Cartesian grid alpha = x + i y."""
    re_axis = np.asarray(re_axis, dtype=float)
    im_axis = np.asarray(im_axis, dtype=float)
    alphas = re_axis[None, :] + 1j * im_axis[:, None]
    values, used = wigner_points(rho, alphas, n_max_eval=n_max_eval)
    return WignerGrid(
        re_axis=re_axis,
        im_axis=im_axis,
        values=values.reshape(im_axis.size, re_axis.size),
        n_max_eval=used,
    )


def default_grid_axes(centroid_radius: float, step: float = 0.1, margin: float = 4.0):
    """Symmetric axes spanning +-(centroid_radius + margin) at the given step."""
    extent = centroid_radius + margin
    n = int(np.floor(extent / step))
    axis = np.arange(-n, n + 1) * step
    return axis, axis.copy()


def angular_profile(
    rho: np.ndarray, radius: float, n_theta: int = 720, n_max_eval: int | None = None
) -> AngularProfile:
    """W along the fixed radius, sampled on n_theta uniform angles in [-pi, pi)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n_theta < 64:
        raise ValueError("need at least 64 angular samples")
    thetas = -np.pi + 2 * np.pi * np.arange(n_theta) / n_theta
    alphas = radius * np.exp(1j * thetas)
    values, used = wigner_points(rho, alphas, n_max_eval=n_max_eval)
    return AngularProfile(radius=radius, thetas=thetas, values=values, n_max_eval=used)


def detect_peaks(profile: AngularProfile, min_prominence: float):
    """Cyclic local maxima with the requested prominence, refined by quadratic
    interpolation through each maximum and its two neighbors.

    Returns a list of (theta, height) sorted by theta.
    """
    if min_prominence <= 0:
        raise ValueError("min_prominence must be positive")
    v = profile.values
    n = v.size
    extended = np.concatenate([v, v, v])
    idx, _ = find_peaks(extended, prominence=min_prominence)
    idx = idx[(idx >= n) & (idx < 2 * n)]

    dtheta = 2 * np.pi / n
    out = []
    for i in idx:
        denom = extended[i - 1] - 2 * extended[i] + extended[i + 1]
        if denom != 0:
            shift = 0.5 * (extended[i - 1] - extended[i + 1]) / denom
            height = extended[i] - 0.25 * (extended[i - 1] - extended[i + 1]) * shift
        else:
            shift, height = 0.0, extended[i]
        theta = -np.pi + ((i - n) + shift) * dtheta
        theta = (theta + np.pi) % (2 * np.pi) - np.pi
        out.append((float(theta), float(height)))
    return sorted(out)


def estimate_spectrum(peaks, t: float, reference_height: float) -> SpectralEstimate:
    """Convert peak angles at evolution time t into eigenenergies E = -theta/t
    (alias window (-pi/t, pi/t]) and heights into population weights against a
    single-component reference height."""
    if t <= 0:
        raise ValueError("evolution time must be positive")
    if reference_height <= 0:
        raise ValueError("reference height must be positive")
    thetas = np.array([p[0] for p in peaks], dtype=float)
    heights = np.array([p[1] for p in peaks], dtype=float)
    energies = -thetas / t
    weights = heights / reference_height
    if thetas.size >= 2:
        s = np.sort(thetas)
        gaps = np.diff(np.concatenate([s, [s[0] + 2 * np.pi]]))
        min_sep = float(gaps.min())
    else:
        min_sep = float("inf")
    return SpectralEstimate(
        evolution_time=float(t),
        thetas=thetas,
        energies=energies,
        weights=weights,
        min_separation=min_sep,
    )
