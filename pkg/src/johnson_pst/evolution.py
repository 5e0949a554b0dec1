"""
Three independent evolution routes used to certify a design.

1. ``spectral_amplitudes``: f_i(t) = sum_k gamma_k P_i(x_k) exp(-i E_k t),
   O(m^2), never touches anything larger than (m+1) x (m+1).
2. ``DenseSectorOracle``: H = sum_j c_j A^j on the full C(2m, m)-vertex
   graph, exponentiated by dense Hermitian eigendecomposition.
3. ``heisenberg_oracle``: the spin Hamiltonian on 2m qubits built from
   Pauli matrices (or, for m > 4, from transpositions on the m-excitation
   sector), evolved from the GHZ input state.

Spin conventions: site ``i`` (1-based) corresponds to graph element ``i``
and to bit ``2m - i`` of the computational-basis index, so site 1 is the
leftmost tensor factor.  An excitation is a ``1``.  The GHZ input sits on
sites 1..m, the output register is sites m+1..2m.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, expm_multiply

from .design import PSTDesign, hamiltonian_in_adjacency_basis, polyval_matrix
from .errors import CapacityError, DomainError, IdentityViolationError, IntegrityError
from .graph import JohnsonGraph, adjacency_sparse, antipode, build_johnson, distance_matrices, stratify

DEFAULT_DENSE_CAP = 10**4
DEFAULT_SPIN_CAP = 2**16
FULL_SPACE_MAX_M = 4
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class AmplitudeSeries:
    times: np.ndarray
    amplitudes: np.ndarray  # shape (len(times), m + 1)

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(np.sum(np.abs(self.amplitudes) ** 2, axis=1) - 1)))


@dataclass(frozen=True)
class GHZTransferReport:
    m: int
    t0: float
    amplitude_to_antipode: complex
    vacuum_phase: complex
    ghz_fidelity: float
    relative_phase: float
    state_distance: float
    mode: str

    @property
    def global_phase(self) -> float:
        return float(np.angle(self.vacuum_phase))


# ------------------------------------------------------------------
# spectral route
# ------------------------------------------------------------------

def spectral_amplitudes(design: PSTDesign, t) -> np.ndarray:
    """Stratum amplitudes <phi_i| exp(-iHt) |phi_0>, i = 0..m.

    E is recomputed from the couplings, so a tampered design is judged by
    what its J actually do.  ``t`` may be a scalar or a 1-d array; in the
    latter case the result has shape ``(len(t), m + 1)``.
    """
    P = design.eigen.P
    gamma = np.diag(design.eigen.W)
    E = P.T @ design.couplings
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t, E))
    return (phases * gamma) @ P.T


def transfer_metrics(design: PSTDesign, t=None) -> tuple[float, float]:
    """(|f_m(t)|, max_{i<m} |f_i(t)|) at ``t`` (default t0)."""
    f = spectral_amplitudes(design, design.t0 if t is None else t)
    return float(abs(f[-1])), float(np.max(np.abs(f[:-1])))


def fidelity_sweep(design: PSTDesign, t_min: float, t_max: float, steps: int) -> AmplitudeSeries:
    if steps < 2:
        raise DomainError(f"need at least 2 steps, got {steps}")
    if not t_min < t_max:
        raise DomainError(f"need t_min < t_max, got [{t_min}, {t_max}]")
    times = np.linspace(t_min, t_max, steps)
    return AmplitudeSeries(times, spectral_amplitudes(design, times))


# ------------------------------------------------------------------
# dense sector route
# ------------------------------------------------------------------

class DenseSectorOracle:
    """Exact evolution of the one-sector walk on J(2m, m).

    The eigendecomposition of H is computed once; every time point is then
    a pair of matrix-vector products.
    """

    def __init__(self, design: PSTDesign, graph: JohnsonGraph | None = None, cap: int = DEFAULT_DENSE_CAP):
        m = design.m
        if comb(2 * m, m) > cap:
            raise CapacityError(f"C({2 * m},{m}) = {comb(2 * m, m)} exceeds dense cap {cap}")
        self.graph = graph or build_johnson(2 * m, m)
        if (self.graph.n, self.graph.m) != (2 * m, m):
            raise DomainError("graph does not match the design")
        self.design = design
        self.reference = 0
        self.target = antipode(self.graph, self.reference)
        A = _dense_adjacency(self.graph)
        H = polyval_matrix(hamiltonian_in_adjacency_basis(design), A.astype(float))
        herm = np.max(np.abs(H - H.T))
        if herm > HERMITIAN_TOL * max(1.0, np.max(np.abs(H))):
            raise IntegrityError(f"Hamiltonian not Hermitian, residual {herm:.3e}")
        self.energies, self.vectors = np.linalg.eigh(H)
        self.strat = stratify(self.graph, self.reference)

    def state(self, t: float) -> np.ndarray:
        v = self.vectors
        coeff = np.exp(-1j * self.energies * t) * v[self.reference]
        return v @ coeff

    def amplitude(self, t: float) -> complex:
        return complex(self.state(t)[self.target])

    def stratum_amplitudes(self, t: float) -> np.ndarray:
        return self.strat.unit_vectors @ self.state(t)


def _dense_adjacency(g: JohnsonGraph) -> np.ndarray:
    dm = distance_matrices(g)
    return dm[1] if dm.dense else dm[1].toarray()


def dense_sector_evolution(design: PSTDesign, t: float, graph: JohnsonGraph | None = None,
                           cap: int = DEFAULT_DENSE_CAP) -> complex:
    """<antipode| exp(-iHt) |reference> on the full vertex space."""
    return DenseSectorOracle(design, graph, cap).amplitude(t)


# ------------------------------------------------------------------
# many-body route
# ------------------------------------------------------------------

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _site_operator(op: np.ndarray, site: int, nsites: int) -> sparse.csr_array:
    out = sparse.identity(1, dtype=complex, format="csr")
    for s in range(1, nsites + 1):
        out = sparse.kron(out, op if s == site else sparse.identity(2, format="csr"), format="csr")
    return out


def heisenberg_exchange(nsites: int) -> sparse.csr_array:
    """(1/2) sum_{i<j} sigma_i . sigma_j on the full 2^nsites space."""
    dim = 2**nsites
    singles = [[_site_operator(p, s, nsites) for p in _PAULI] for s in range(1, nsites + 1)]
    out = sparse.csr_array((dim, dim), dtype=complex)
    for i in range(nsites):
        for j in range(i + 1, nsites):
            for a in range(3):
                out = out + singles[i][a] @ singles[j][a]
    return 0.5 * out


def basis_index(sites, nsites: int) -> int:
    """Computational-basis index of the state with excitations on ``sites``."""
    return sum(1 << (nsites - s) for s in sites)


def sector_indices(g: JohnsonGraph) -> np.ndarray:
    """Full-space index of every sector basis state, in colex vertex order."""
    return np.array([basis_index(g.subset(v), g.n) for v in range(g.N)])


def transposition_sum_sector(n: int, m: int) -> sparse.csr_array:
    """sum_{i<j} P_ij restricted to states with m excitations among n sites.

    Built by acting with each swap on the subset labels directly.
    """
    g = build_johnson(n, m)
    rows, cols = [], []
    for v in range(g.N):
        mask = int(g.masks[v])
        for i in range(n):
            for j in range(i + 1, n):
                bi, bj = mask >> i & 1, mask >> j & 1
                w = v if bi == bj else g.index_of_mask(mask ^ (1 << i) ^ (1 << j))
                rows.append(w)
                cols.append(v)
    data = np.ones(len(rows), dtype=np.int64)
    return sparse.csr_array((data, (rows, cols)), shape=(g.N, g.N))


def heisenberg_oracle(
    m: int,
    design: PSTDesign,
    t: float | None = None,
    spin_cap: int = DEFAULT_SPIN_CAP,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> GHZTransferReport:
    """Evolve (|0...0> + |1..10..0>)/sqrt(2) under H_G on 2m spins.

    For m <= 4 the operator is assembled on the full 2^{2m} space from Pauli
    matrices; larger m use the m-excitation sector built from
    transpositions, plus the vacuum, which is an exact eigenvector.  Either
    way the sector block of (1/2) sum sigma.sigma + m/2 must equal the
    Johnson adjacency matrix exactly, otherwise IdentityViolationError.
    """
    if m != design.m:
        raise DomainError(f"design is for m={design.m}, not {m}")
    if 4**m > spin_cap:
        raise CapacityError(f"2^{2 * m} exceeds spin cap {spin_cap}")
    t = design.t0 if t is None else t
    nsites = 2 * m
    g = build_johnson(nsites, m)
    A = adjacency_sparse(g)
    coeffs = hamiltonian_in_adjacency_basis(design)
    ref, tgt = 0, antipode(g, 0)

    if m <= FULL_SPACE_MAX_M:
        mode = "full"
        S = heisenberg_exchange(nsites).toarray() + 0.5 * m * np.eye(2**nsites)
        idx = sector_indices(g)
        block = S[np.ix_(idx, idx)]
        if not (np.array_equal(block.imag, np.zeros_like(block.imag))
                and np.array_equal(block.real, A.toarray().astype(float))):
            raise IdentityViolationError("sector block of the exchange operator differs from A")
        H = polyval_matrix(coeffs, S)
        herm = np.max(np.abs(H - H.conj().T))
        if herm > HERMITIAN_TOL * max(1.0, np.max(np.abs(H))):
            raise IntegrityError(f"H_G not Hermitian, residual {herm:.3e}")
        lam, V = np.linalg.eigh(H)
        psi0 = np.zeros(2**nsites, dtype=complex)
        vac = 0
        a_state, b_state = idx[ref], idx[tgt]
        psi0[vac] = psi0[a_state] = 1 / np.sqrt(2)
        psi = V @ (np.exp(-1j * lam * t) * (V.conj().T @ psi0))
        vac_amp, b_amp = psi[vac] * np.sqrt(2), psi[b_state] * np.sqrt(2)
        target = np.zeros_like(psi0)
        target[vac] = target[b_state] = 1 / np.sqrt(2)
    else:
        mode = "sector"
        if g.N > dense_cap:
            raise CapacityError(f"sector dimension {g.N} exceeds dense cap {dense_cap}")
        T = transposition_sum_sector(nsites, m)
        # (1/2) sum sigma.sigma + m/2 = sum P_ij - C(2m,2)/2 + m/2; on the sector this is A
        S_twice = 2 * T - comb(nsites, 2) * sparse.identity(g.N, dtype=np.int64) + m * sparse.identity(g.N, dtype=np.int64)
        if (S_twice - 2 * A).count_nonzero() != 0:
            raise IdentityViolationError("sector exchange operator differs from A")
        # vacuum: every P_ij acts as identity
        s_vac = comb(nsites, 2) - comb(nsites, 2) / 2 + m / 2
        e_vac = float(np.polyval(coeffs[::-1], s_vac))
        S = (S_twice / 2).astype(float)
        apply = lambda x: _horner_apply(coeffs, S, x)  # noqa: E731
        op = LinearOperator((g.N, g.N), matvec=apply, rmatvec=apply, dtype=complex)
        start = np.zeros(g.N, dtype=complex)
        start[ref] = 1.0
        # traceA only sets the shift used internally; any value is exact
        evolved = expm_multiply(-1j * t * op, start, traceA=-1j * t * coeffs[0] * g.N)
        vac_amp = np.exp(-1j * e_vac * t)
        b_amp = evolved[tgt]
        psi = np.concatenate([[vac_amp / np.sqrt(2)], evolved / np.sqrt(2)])
        target = np.zeros_like(psi)
        target[0] = target[1 + tgt] = 1 / np.sqrt(2)

    overlap = np.vdot(target, psi)
    fidelity = float(abs(overlap) ** 2)
    rel = float(np.angle(b_amp / vac_amp)) if abs(vac_amp) > 0 else float("nan")
    expected = np.exp(1j * design.theta) * target
    dist = float(np.linalg.norm(psi - expected))
    return GHZTransferReport(m, float(t), complex(b_amp), complex(vac_amp), fidelity, rel, dist, mode)


def _horner_apply(coeffs, S, x):
    y = coeffs[-1] * x
    for c in coeffs[-2::-1]:
        y = S @ y + c * x
    return y

