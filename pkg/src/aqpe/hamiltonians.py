"""Hamiltonian builders: XY target models, their dispersive cavity coupling,
the full physical cavity-coupler-qubit Hamiltonian, and the engineered
dispersive coefficients with the local-field nulling solver.

All frequencies here are angular (rad/s, hbar = 1); the Hz-to-rad/s
conversion lives at the configuration boundary.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import HierarchyWarning
from .linalg import kron, kron_all
from .states import (
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    embed_qubit_op,
    ladder_ops,
)

DEFAULT_HIERARCHY_RATIOS = (10.0, 10.0)  # (|Delta|/max|J|, min|J|/|g|)


@dataclass(frozen=True)
class XYGraph:
    """Coupling graph of a generalized XY model.

    ``edges`` holds (k, k', eta_kk') with eta in rad/s; ``local_z`` holds an
    optional longitudinal field lambda_k (rad/s) per site.
    """

    n_sites: int
    edges: tuple
    local_z: tuple | None = None

    def __post_init__(self):
        edges = tuple((int(k), int(kp), float(eta)) for k, kp, eta in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for k, kp, _ in edges:
            if k == kp:
                raise ValueError(f"self-edge at site {k}")
            if not (0 <= k < self.n_sites and 0 <= kp < self.n_sites):
                raise ValueError(f"edge ({k},{kp}) out of range for {self.n_sites} sites")
            key = frozenset((k, kp))
            if key in seen:
                raise ValueError(f"duplicate undirected edge ({k},{kp})")
            seen.add(key)
        if self.local_z is not None:
            lz = tuple(float(x) for x in self.local_z)
            if len(lz) != self.n_sites:
                raise ValueError("local_z length must equal n_sites")
            object.__setattr__(self, "local_z", lz)


def build_xy_target(graph: XYGraph, n_qubits: int | None = None) -> np.ndarray:
    """sum_<k,k'> eta (s+_k s-_k' + s-_k s+_k') + sum_k (lambda_k/2) sz_k."""
    n_qubits = graph.n_sites if n_qubits is None else int(n_qubits)
    if n_qubits < graph.n_sites:
        raise ValueError("n_qubits must cover every graph site")
    dim = 2**n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for k, kp, eta in graph.edges:
        sp_sm = embed_qubit_op(SIGMA_PLUS, k, n_qubits) @ embed_qubit_op(
            SIGMA_MINUS, kp, n_qubits
        )
        h += eta * (sp_sm + sp_sm.conj().T)
    if graph.local_z is not None:
        for k, lam in enumerate(graph.local_z):
            if lam != 0.0:
                h += (lam / 2) * embed_qubit_op(SIGMA_Z, k, n_qubits)
    return h


def build_aqpe(h_target: np.ndarray, n_max: int) -> np.ndarray:
    """Dispersive Hamiltonian n_hat (x) H_target on the cavity-first layout."""
    h_target = np.asarray(h_target, dtype=complex)
    scale = np.abs(h_target).max()
    if scale > 0 and np.abs(h_target - h_target.conj().T).max() > 1e-9 * scale:
        raise ValueError("target Hamiltonian must be Hermitian")
    _, _, n_op = ladder_ops(n_max)
    return kron(n_op, h_target)


@dataclass(frozen=True)
class PhysicalLayout:
    """Parameters of the physical cavity + target + coupler architecture.

    Subsystem ordering (fixed package-wide): cavity, then target qubits
    ascending, then local couplers by target index, then cross couplers by
    edge order.  Target qubits sit at omega_c + delta (uniform detuning);
    all couplers share a single configurable detuning.
    """

    omega_c: float
    delta: float
    coupler_delta: float
    g: float
    n_targets: int
    edges: tuple  # (k, k') pairs of target sites
    j_local: tuple  # one J_l per target
    j_cross: tuple  # one J_m per edge

    def __post_init__(self):
        edges = tuple((int(k), int(kp)) for k, kp in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "j_local", tuple(float(j) for j in self.j_local))
        object.__setattr__(self, "j_cross", tuple(float(j) for j in self.j_cross))
        if len(self.j_local) != self.n_targets:
            raise ValueError("need one local coupling per target qubit")
        if len(self.j_cross) != len(edges):
            raise ValueError("need one cross coupling per edge")
        for k, kp in edges:
            if k == kp or not (0 <= k < self.n_targets and 0 <= kp < self.n_targets):
                raise ValueError(f"edge ({k},{kp}) inconsistent with {self.n_targets} targets")

    @property
    def n_couplers(self) -> int:
        return self.n_targets + len(self.edges)

    @property
    def n_qubits(self) -> int:
        return self.n_targets + self.n_couplers

    @property
    def omega_targets(self) -> tuple:
        return (self.omega_c + self.delta,) * self.n_targets

    @property
    def omega_couplers(self) -> tuple:
        return (self.omega_c + self.coupler_delta,) * self.n_couplers

    def hierarchy_ratios(self) -> tuple[float, float]:
        """(min|detuning| / max|J|, min|J| / |g|); large is dispersive-safe."""
        js = [abs(j) for j in self.j_local + self.j_cross if j != 0.0]
        if not js or self.g == 0.0:
            return (np.inf, np.inf)
        d_min = min(abs(self.delta), abs(self.coupler_delta))
        return (d_min / max(js), min(js) / abs(self.g))


def check_hierarchy(layout: PhysicalLayout, ratios=DEFAULT_HIERARCHY_RATIOS, strict=False):
    """Warn (or raise under strict) when |Delta| >> |J| >> |g| is violated."""
    r1, r2 = layout.hierarchy_ratios()
    msgs = []
    if r1 < ratios[0]:
        msgs.append(f"|Delta|/max|J| = {r1:.2f} below threshold {ratios[0]}")
    if r2 < ratios[1]:
        msgs.append(f"min|J|/|g| = {r2:.2f} below threshold {ratios[1]}")
    for msg in msgs:
        if strict:
            raise ValueError("dispersive hierarchy violated: " + msg)
        warnings.warn(msg, HierarchyWarning, stacklevel=2)
    return (r1, r2)


def build_full(layout: PhysicalLayout, n_max: int) -> np.ndarray:
    """Full physical Hamiltonian: cavity energy, qubit energies, local and
    cross exchange couplings, and uniform Jaynes-Cummings coupling of every
    coupler to the cavity.  Conserves the total excitation number."""
    a, adag, n_op = ladder_ops(n_max)
    nq = layout.n_qubits
    dim_q = 2**nq
    eye_c = np.eye(n_max + 1, dtype=complex)
    eye_q = np.eye(dim_q, dtype=complex)

    # Qubit index map per the documented ordering.
    target_idx = list(range(layout.n_targets))
    local_idx = [layout.n_targets + k for k in range(layout.n_targets)]
    cross_idx = [2 * layout.n_targets + e for e in range(len(layout.edges))]

    h = layout.omega_c * kron(n_op, eye_q)

    omegas = layout.omega_targets + layout.omega_couplers
    for q, omega in enumerate(omegas):
        h += (omega / 2) * kron(eye_c, embed_qubit_op(SIGMA_Z, q, nq))

    for k in range(layout.n_targets):
        ex = embed_qubit_op(SIGMA_PLUS, local_idx[k], nq) @ embed_qubit_op(
            SIGMA_MINUS, target_idx[k], nq
        )
        h += layout.j_local[k] * kron(eye_c, ex + ex.conj().T)

    for e, (k, kp) in enumerate(layout.edges):
        sm_pair = embed_qubit_op(SIGMA_MINUS, target_idx[k], nq) + embed_qubit_op(
            SIGMA_MINUS, target_idx[kp], nq
        )
        ex = embed_qubit_op(SIGMA_PLUS, cross_idx[e], nq) @ sm_pair
        h += layout.j_cross[e] * kron(eye_c, ex + ex.conj().T)

    for q in local_idx + cross_idx:
        jc = kron(adag, embed_qubit_op(SIGMA_MINUS, q, nq))
        h += layout.g * (jc + jc.conj().T)

    return h


@dataclass(frozen=True)
class EngineeredCoeffs:
    """Dispersive coefficients produced by the coupler-mediated interaction."""

    lambda_eng: tuple  # rad/s per target site
    eta_eng: tuple  # rad/s per edge
    edges: tuple = field(default=())


def engineered_coeffs(layout: PhysicalLayout) -> EngineeredCoeffs:
    """Effective longitudinal fields and exchange strengths of the engineered
    cavity-conditioned target interaction.

    eta_kk' = (3 g^2 / 2 Delta^3) J_m^2 per edge;
    lambda_k = -(2 g^2 / Delta^3) [ J_l^2/4 + sum J_m^2/4 + J_l sum J_m
               + sum over unordered neighbor pairs J_m J_m' ].
    """
    g, delta = layout.g, layout.delta
    if delta == 0.0:
        raise ValueError("target detuning must be non-zero")
    pref = g**2 / delta**3

    eta = tuple(1.5 * pref * jm**2 for jm in layout.j_cross)

    lams = []
    for k in range(layout.n_targets):
        jms = [layout.j_cross[e] for e, (a, b) in enumerate(layout.edges) if k in (a, b)]
        jl = layout.j_local[k]
        bracket = 0.25 * jl**2 + 0.25 * sum(jm**2 for jm in jms) + jl * sum(jms)
        bracket += sum(x * y for x, y in combinations(jms, 2))
        lams.append(-2.0 * pref * bracket)
    return EngineeredCoeffs(lambda_eng=tuple(lams), eta_eng=eta, edges=layout.edges)


def engineered_target_graph(coeffs: EngineeredCoeffs, n_sites: int) -> XYGraph:
    """XY graph carrying the engineered exchange and longitudinal terms."""
    edges = tuple((k, kp, eta) for (k, kp), eta in zip(coeffs.edges, coeffs.eta_eng))
    return XYGraph(n_sites=n_sites, edges=edges, local_z=coeffs.lambda_eng)


def solve_zero_lambda(j_cross_at_site) -> tuple[float, float]:
    """Local couplings J_l that null the engineered longitudinal field at a
    site with the given cross couplings.

    Solves J_l^2/4 + S J_l + C = 0 with S = sum J_m and
    C = sum J_m^2 / 4 + sum over unordered pairs J_m J_m'.  Returns both real
    roots sorted by magnitude; raises when the pattern cannot be nulled.
    """
    jms = [float(j) for j in j_cross_at_site]
    if not jms:
        raise ValueError("need at least one cross coupling at the site")
    s = sum(jms)
    c = 0.25 * sum(j**2 for j in jms) + sum(x * y for x, y in combinations(jms, 2))
    disc = s**2 - c
    if disc < 0:
        raise ValueError(
            f"no real local coupling nulls this site (discriminant {disc:.3e} < 0)"
        )
    roots = (2 * (-s + np.sqrt(disc)), 2 * (-s - np.sqrt(disc)))
    return tuple(sorted(roots, key=abs))


def two_qubit_preset(
    eta_target: float,
    g: float,
    delta: float,
    coupler_delta: float | None = None,
    omega_c: float = 2 * np.pi * 5e9,
    hierarchy_ratios=DEFAULT_HIERARCHY_RATIOS,
    strict: bool = False,
):
    """Minimal two-target layout realizing a pure exchange coupling.

    Inverts eta = (3 g^2 / 2 Delta^3) J_m^2 for the cross coupling and picks
    the magnitude-smaller zero-lambda root for the local couplings.  Returns
    (layout, coeffs) with coeffs.eta_eng[0] == eta_target and zero lambda.
    """
    if eta_target <= 0:
        raise ValueError("eta_target must be positive")
    arg = 2 * delta**3 * eta_target / (3 * g**2)
    if arg <= 0:
        raise ValueError("delta^3 * eta / g^2 must be positive to solve for J_m")
    j_m = float(np.sqrt(arg))
    j_l = solve_zero_lambda([j_m])[0]
    layout = PhysicalLayout(
        omega_c=omega_c,
        delta=delta,
        coupler_delta=delta if coupler_delta is None else coupler_delta,
        g=g,
        n_targets=2,
        edges=((0, 1),),
        j_local=(j_l, j_l),
        j_cross=(j_m,),
    )
    check_hierarchy(layout, ratios=hierarchy_ratios, strict=strict)
    return layout, engineered_coeffs(layout)


def total_excitation_number(layout: PhysicalLayout, n_max: int) -> np.ndarray:
    """N = n_hat + sum_mu (sigma_z + 1)/2 on the full composite space."""
    _, _, n_op = ladder_ops(n_max)
    nq = layout.n_qubits
    eye_q = np.eye(2**nq, dtype=complex)
    total = kron(n_op, eye_q)
    for q in range(nq):
        total += kron(
            np.eye(n_max + 1, dtype=complex),
            (embed_qubit_op(SIGMA_Z, q, nq) + eye_q) / 2,
        )
    return total


def pauli_xy_term(k: int, kp: int, n_qubits: int) -> np.ndarray:
    """(sx_k sx_k' + sy_k sy_k') / 2, the explicit Pauli form of one exchange
    term; used as an independent cross-check of the ladder construction."""
    sx = embed_qubit_op(np.array([[0, 1], [1, 0]], dtype=complex), k, n_qubits)
    sxp = embed_qubit_op(np.array([[0, 1], [1, 0]], dtype=complex), kp, n_qubits)
    sy = embed_qubit_op(np.array([[0, -1j], [1j, 0]], dtype=complex), k, n_qubits)
    syp = embed_qubit_op(np.array([[0, -1j], [1j, 0]], dtype=complex), kp, n_qubits)
    return (sx @ sxp + sy @ syp) / 2


# kron_all re-exported for the hand-built oracle constructions in tests/demos.
__all__ = [
    "XYGraph",
    "PhysicalLayout",
    "EngineeredCoeffs",
    "build_xy_target",
    "build_aqpe",
    "build_full",
    "engineered_coeffs",
    "engineered_target_graph",
    "solve_zero_lambda",
    "two_qubit_preset",
    "check_hierarchy",
    "total_excitation_number",
    "pauli_xy_term",
    "kron_all",
    "DEFAULT_HIERARCHY_RATIOS",
]
