"""
Coupling constants for perfect GHZ-state transfer on J(2m, m).

The Hamiltonian is H = sum_l J_l P_l(A).  In the stratification space its
eigenvalue on the spectral point x_k is E_k = sum_l J_l P_l(x_k), i.e.
E = P^t J.  Transfer from the reference vertex to its antipode at time t0
with phase theta requires

    exp(-i t0 E_k) = exp(i theta) * P_m(x_k)        for every k,

and since P_m(x_k) = +-1 the admissible eigenvalues are
E_k = -(theta + (2 l_k + f_k) pi) / t0 with integer branch offsets l_k and
parity bits f_k = (1 - sign P_m(x_k)) / 2.  Inverting E = P^t J uses
(P^t)^{-1} = P W, so J = P W E.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np

from .errors import DomainError, NotAntipodalError
from .spectral import (
    EigenMatrix,
    QDParameters,
    SpectralMeasure,
    coefficient_vectors,
    eigenmatrix,
    johnson_qd,
    spectral_measure,
)

SIGN_TOL = 1e-8


@dataclass(frozen=True)
class DesignInput:
    m: int
    t0: float = 1.0
    theta: float = 0.0
    l_offsets: tuple[int, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise DomainError(f"m must be an integer >= 1, got {self.m!r}")
        if not self.t0 > 0:
            raise DomainError(f"t0 must be positive, got {self.t0}")
        if self.l_offsets is None:
            object.__setattr__(self, "l_offsets", (0,) * (self.m + 1))
        else:
            offs = tuple(int(v) for v in self.l_offsets)
            if len(offs) != self.m + 1:
                raise DomainError(f"need {self.m + 1} l_offsets, got {len(offs)}")
            object.__setattr__(self, "l_offsets", offs)


@dataclass(frozen=True)
class PSTDesign:
    """A solved design.  Arrays are indexed like ``measure.points``."""

    input: DesignInput
    f_bits: tuple[int, ...]
    couplings: np.ndarray
    hamiltonian_eigenvalues: np.ndarray
    measure: SpectralMeasure
    eigen: EigenMatrix = field(repr=False, compare=False, default=None)

    @property
    def m(self) -> int:
        return self.input.m

    @property
    def t0(self) -> float:
        return self.input.t0

    @property
    def theta(self) -> float:
        return self.input.theta

    @property
    def qd(self) -> QDParameters:
        return johnson_qd(self.m)

    def with_couplings(self, couplings) -> PSTDesign:
        """Copy with replaced J; eigenvalues recomputed as P^t J."""
        J = np.asarray(couplings, dtype=float)
        E = self.eigen.P.T @ J
        return PSTDesign(self.input, self.f_bits, J, E, self.measure, self.eigen)


def phase_targets(P: EigenMatrix) -> tuple[int, ...]:
    """Parity bits f_k read off the last row of the eigenmatrix.

    Raises
    ------
    NotAntipodalError
        If some |P_d(x_k)| differs from 1 by more than 1e-8.
    """
    last = np.asarray(P.P[-1], dtype=float)
    bad = np.abs(np.abs(last) - 1.0)
    if np.any(bad > SIGN_TOL):
        raise NotAntipodalError(
            f"|P_d(x_k)| deviates from 1 by up to {bad.max():.3e}; last stratum is not a singleton"
        )
    return tuple(0 if v > 0 else 1 for v in last)


def target_eigenvalues(inp: DesignInput, f_bits, phase_scale: int = 1) -> np.ndarray:
    l = np.asarray(inp.l_offsets, dtype=float)
    f = np.asarray(f_bits, dtype=float)
    return -(inp.theta + (2 * l + f) * pi) / (phase_scale * inp.t0) + 0.0


def design_couplings(
    qd: QDParameters,
    measure: SpectralMeasure,
    P: EigenMatrix,
    inp: DesignInput,
    phase_scale: int = 1,
) -> PSTDesign:
    """Solve for J = P W E.

    ``phase_scale=2`` reproduces the variant with a 1/(2 t0) prefactor,
    whose couplings are exactly half as large and complete the transfer at
    2 t0 instead of t0.  It exists for comparison only.
    """
    if qd.d != inp.m or len(measure) != inp.m + 1 or P.P.shape[0] != inp.m + 1:
        raise DomainError("QD parameters, measure and eigenmatrix disagree on the diameter")
    em = P.as_float() if P.exact else P
    f = phase_targets(em)
    E = target_eigenvalues(inp, f, phase_scale)
    J = em.P @ (np.diag(em.W) * E)
    float_measure = SpectralMeasure(
        tuple(float(x) for x in measure.points), tuple(float(g) for g in measure.weights)
    )
    return PSTDesign(inp, f, J, E, float_measure, em)


def design_johnson(
    m: int,
    t0: float = 1.0,
    theta: float = 0.0,
    l_offsets=None,
    exact: bool = True,
    phase_scale: int = 1,
) -> PSTDesign:
    """Full pipeline on J(2m, m), support in canonical descending order.

    The spectral stage runs in rational arithmetic by default and is rounded
    to float only at the end; float mode loses accuracy once m exceeds ~10.
    """
    inp = DesignInput(m, t0, theta, l_offsets)
    qd = johnson_qd(m, exact=exact)
    mu = spectral_measure(qd)
    em = eigenmatrix(qd, mu)
    return design_couplings(qd, mu, em, inp, phase_scale)


def hamiltonian_in_adjacency_basis(design: PSTDesign, qd: QDParameters | None = None) -> np.ndarray:
    """Coefficients c_0..c_m with sum_l J_l P_l(x) = sum_j c_j x^j."""
    qd = qd or design.qd
    polys = coefficient_vectors(qd)
    c = np.zeros(qd.d + 1)
    for J, p in zip(design.couplings, polys):
        c[: p.size] += J * p
    return c


def polyval_matrix(coeffs, A):
    """sum_j c_j A^j for a dense square matrix, by Horner's rule."""
    n = A.shape[0]
    out = coeffs[-1] * np.eye(n)
    for c in coeffs[-2::-1]:
        out = A @ out + c * np.eye(n)
    return out
