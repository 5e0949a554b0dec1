"""
Spectral distribution of a distance-regular network seen from one vertex.

Everything here lives in the (d+1)-dimensional stratification space: the
QD (Jacobi) parameters alpha, omega define monic polynomials Q_k, their
associated polynomials Q^(1)_k, and the orthonormal P_k; the spectral
measure is supported on the roots of Q_{d+1} with Gauss weights given by
the residues of Q^(1)_d / Q_{d+1}.

Two arithmetic modes are supported.  In float mode all values are Python
floats / numpy float64.  In exact mode (``exact=True``) alpha and omega are
:class:`fractions.Fraction` and support, weights and eigenmatrix entries are
computed without rounding; this only works when the support is rational and
the products omega_1...omega_k are perfect squares, which is the case for
Johnson networks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm, sqrt

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    DegeneracyError,
    DomainError,
    NumericalFailure,
    PoleProximityError,
)
from .graph import IntersectionArray

WEIGHT_SUM_TOL = 1e-12
ORTHO_TOL = 1e-8
DEGENERACY_GAP = 1e-8
POLE_TOL = 1e-8


@dataclass(frozen=True)
class QDParameters:
    alpha: tuple
    omega: tuple
    exact: bool = False

    def __post_init__(self):
        if len(self.alpha) != len(self.omega) + 1:
            raise DomainError("need len(alpha) == len(omega) + 1")
        if self.alpha[0] != 0:
            raise DomainError(f"alpha_0 must be 0, got {self.alpha[0]}")
        if any(w <= 0 for w in self.omega):
            raise DomainError(f"omega must be positive, got {self.omega}")

    @property
    def d(self) -> int:
        return len(self.omega)


@dataclass(frozen=True)
class SpectralMeasure:
    points: tuple
    weights: tuple
    exact: bool = False

    def __len__(self) -> int:
        return len(self.points)

    def reordered(self, points) -> SpectralMeasure:
        """Same measure listed in the order of ``points`` (matched to 1e-9)."""
        idx = [_locate(self.points, p) for p in points]
        return SpectralMeasure(
            tuple(self.points[i] for i in idx),
            tuple(self.weights[i] for i in idx),
            self.exact,
        )

    def moment(self, j: int):
        return sum(w * x**j for x, w in zip(self.points, self.weights))


@dataclass(frozen=True)
class EigenMatrix:
    """P[i, k] = P_i(x_k) and the weights W = diag(gamma).

    In exact mode ``P`` and ``W`` are object arrays of Fractions.
    """

    P: np.ndarray
    W: np.ndarray
    points: tuple = field(default=())

    @property
    def inverse(self) -> np.ndarray:
        """P^{-1} = W P^t, valid because P W P^t = I."""
        return self.W @ self.P.T

    @property
    def exact(self) -> bool:
        return self.P.dtype == object

    def residual(self) -> float:
        """max |P W P^t - I|, computed without rounding in exact mode."""
        if not self.exact:
            R = self.P @ self.W @ self.P.T - np.eye(self.P.shape[0])
            return float(np.max(np.abs(R)))
        return float(max(abs(v) for v in self._exact_gram_defect().flat))

    def _exact_gram_defect(self) -> np.ndarray:
        # scale to integer matrices first; Fraction matmul is far slower
        rows = [_row_denominator(r) for r in self.P]
        w = np.diag(self.W)
        wden = _row_denominator(w)
        Z = np.array(
            [[int(v * den) for v in r] for r, den in zip(self.P, rows)], dtype=object
        )
        wz = np.array([int(v * wden) for v in w], dtype=object)
        G = (Z * wz) @ Z.T
        d = len(rows)
        out = np.empty((d, d), dtype=object)
        for i in range(d):
            for j in range(d):
                out[i, j] = Fraction(G[i, j], rows[i] * rows[j] * wden) - (i == j)
        return out

    def as_float(self) -> EigenMatrix:
        return EigenMatrix(self.P.astype(float), self.W.astype(float), tuple(float(x) for x in self.points))


@dataclass(frozen=True)
class PolyValues:
    """Values at one point: Q_0..Q_{d+1}, Q^(1)_0..Q^(1)_d, P_0..P_d, Q'_{d+1}."""

    Q: tuple
    Q1: tuple
    P: tuple
    dQ: object


def _row_denominator(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def _locate(points, p) -> int:
    for i, x in enumerate(points):
        if abs(x - p) < 1e-9:
            return i
    raise DomainError(f"{p} is not a support point")


def _sqrt_exact(q: Fraction) -> Fraction:
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise DomainError(f"{q} is not a rational square; exact mode unavailable")
    return Fraction(num, den)


# ------------------------------------------------------------------
# QD parameters
# ------------------------------------------------------------------

def qd_from_intersection(arr: IntersectionArray, kappa: int, exact: bool = False) -> QDParameters:
    """alpha_k = kappa - b_k - c_k, omega_k = b_{k-1} c_k (b_d = c_0 = 0)."""
    d = arr.diameter
    if len(arr.c) != d:
        raise DomainError("b and c must have equal length")
    num = Fraction if exact else float
    b = list(arr.b) + [0]
    c = [0] + list(arr.c)
    alpha = tuple(num(kappa - b[k] - c[k]) for k in range(d + 1))
    omega = tuple(num(b[k - 1] * c[k]) for k in range(1, d + 1))
    if any(w <= 0 for w in omega):
        raise DomainError(f"nonpositive omega {omega}")
    return QDParameters(alpha, omega, exact)


def johnson_qd(m: int, exact: bool = False) -> QDParameters:
    """QD parameters of J(2m, m): alpha_l = 2l(m-l), omega_l = l^2 (m-l+1)^2."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    num = Fraction if exact else float
    alpha = tuple(num(2 * l * (m - l)) for l in range(m + 1))
    omega = tuple(num(l * l * (m - l + 1) ** 2) for l in range(1, m + 1))
    return QDParameters(alpha, omega, exact)


# ------------------------------------------------------------------
# polynomials
# ------------------------------------------------------------------

def eval_polys(qd: QDParameters, x) -> PolyValues:
    """Evaluate the three polynomial families at ``x`` by direct recurrence.

    The orthonormal P_k are obtained from the normalized recurrence in
    float mode (avoids overflow of Q_k for large d) and as
    Q_k / sqrt(omega_1...omega_k) in exact mode.
    """
    a, w, d = qd.alpha, qd.omega, qd.d
    if qd.exact:
        x = Fraction(x)
    Q, dQ = monic_values(qd, x)

    Q1 = [1]
    if d >= 1:
        Q1.append(x - a[1])
    for k in range(1, d):
        Q1.append((x - a[k + 1]) * Q1[k] - w[k] * Q1[k - 1])

    if qd.exact:
        P = [Fraction(1)]
        norm = Fraction(1)
        for k in range(1, d + 1):
            norm *= w[k - 1]
            P.append(Q[k] / _sqrt_exact(norm))
    else:
        beta = [sqrt(v) for v in w]
        P = [1.0, (x - a[0]) / beta[0]] if d >= 1 else [1.0]
        for k in range(1, d):
            P.append(((x - a[k]) * P[k] - beta[k - 1] * P[k - 1]) / beta[k])
    return PolyValues(tuple(Q), tuple(Q1), tuple(P), dQ)


def monic_values(qd: QDParameters, x) -> tuple[list, object]:
    """Q_0(x)..Q_{d+1}(x) and Q'_{d+1}(x) (recurrence differentiated term by term)."""
    a, w = qd.alpha, qd.omega
    Q = [1, x - a[0]]
    dQ = [0, 1]
    for k in range(1, qd.d + 1):
        Q.append((x - a[k]) * Q[k] - w[k - 1] * Q[k - 1])
        dQ.append(Q[k] + (x - a[k]) * dQ[k] - w[k - 1] * dQ[k - 1])
    return Q, dQ[-1]


def jacobi_matrix(qd: QDParameters) -> np.ndarray:
    a = np.array(qd.alpha, dtype=float)
    b = np.sqrt(np.array(qd.omega, dtype=float))
    return np.diag(a) + np.diag(b, 1) + np.diag(b, -1)


def _jacobi_eigenvalues(qd: QDParameters) -> np.ndarray:
    a = np.array(qd.alpha, dtype=float)
    if qd.d == 0:
        return a.copy()
    b = np.sqrt(np.array(qd.omega, dtype=float))
    return eigh_tridiagonal(a, b, eigvals_only=True)


def eigenvalue_support(qd: QDParameters) -> tuple:
    """Roots of Q_{d+1}, descending, from the symmetric tridiagonal Jacobi matrix.

    In exact mode each root is snapped to a nearby rational and accepted only
    if Q_{d+1} vanishes there exactly.
    """
    x = np.sort(_jacobi_eigenvalues(qd))[::-1]
    spread = x[0] - x[-1] if x.size > 1 else 1.0
    gaps = -np.diff(x)
    if gaps.size and gaps.min() < DEGENERACY_GAP * spread:
        raise DegeneracyError(f"near-coincident roots, min gap {gaps.min():.3e}")
    if not qd.exact:
        return tuple(float(v) for v in x)
    out = []
    for v in x:
        r = Fraction(float(v)).limit_denominator(10**6)
        if monic_values(qd, r)[0][-1] != 0:
            raise NumericalFailure(f"root near {v} is not rational; use float mode")
        out.append(r)
    return tuple(out)


def gauss_weights(qd: QDParameters, points) -> SpectralMeasure:
    """Residues of G = Q^(1)_d / Q_{d+1} at each support point.

    Raises
    ------
    NumericalFailure
        If a weight is nonpositive or the weights do not sum to one; the raw
        sum is reported, never renormalized.
    """
    weights = []
    for x in points:
        pv = eval_polys(qd, x)
        weights.append(pv.Q1[qd.d] / pv.dQ)
    if any(g <= 0 for g in weights):
        raise NumericalFailure(f"nonpositive Gauss weight in {weights}")
    total = sum(weights)
    if abs(total - 1) > WEIGHT_SUM_TOL:
        raise NumericalFailure(f"Gauss weights sum to {total!r}, not 1")
    if not qd.exact:
        weights = [float(g) for g in weights]
    return SpectralMeasure(tuple(points), tuple(weights), qd.exact)


def spectral_measure(qd: QDParameters) -> SpectralMeasure:
    return gauss_weights(qd, eigenvalue_support(qd))


def stieltjes_value(qd: QDParameters, z: complex, support=None) -> complex:
    """G(z) from the finite continued fraction, evaluated bottom-up."""
    if support is None:
        support = eigenvalue_support(qd)
    dist = min(abs(z - float(x)) for x in support)
    if dist <= POLE_TOL:
        raise PoleProximityError(f"z={z} lies within {dist:.2e} of the support")
    a = [float(v) for v in qd.alpha]
    w = [float(v) for v in qd.omega]
    z = complex(z)
    g = z - a[qd.d]
    for k in range(qd.d, 0, -1):
        # an exact zero of a truncated tail contributes nothing at the next level
        g = z - a[k - 1] - (w[k - 1] / g if g != 0 else 0)
    return 1 / g


def partial_fraction_value(measure: SpectralMeasure, z: complex) -> complex:
    return sum(float(g) / (z - float(x)) for x, g in zip(measure.points, measure.weights))


def eigenmatrix(qd: QDParameters, measure: SpectralMeasure) -> EigenMatrix:
    """Build P[i, k] = P_i(x_k) and W = diag(gamma), then check P W P^t = I."""
    d = qd.d
    dtype = object if qd.exact else float
    P = np.empty((d + 1, d + 1), dtype=dtype)
    for k, x in enumerate(measure.points):
        P[:, k] = eval_polys(qd, x).P
    W = np.zeros((d + 1, d + 1), dtype=dtype)
    if qd.exact:
        W[:] = Fraction(0)
    for k, g in enumerate(measure.weights):
        W[k, k] = g
    em = EigenMatrix(P, W, tuple(measure.points))
    res = em.residual()
    if res > ORTHO_TOL:
        raise NumericalFailure(f"orthonormality residual {res:.3e}")
    return em


def coefficient_vectors(qd: QDParameters) -> list[np.ndarray]:
    """Monomial coefficients (lowest degree first) of P_0, ..., P_d."""
    a = [float(v) for v in qd.alpha]
    beta = [sqrt(float(v)) for v in qd.omega]
    polys = [np.array([1.0])]
    if qd.d >= 1:
        polys.append(np.array([-a[0], 1.0]) / beta[0])
    for k in range(1, qd.d):
        nxt = np.zeros(k + 2)
        nxt[1:] += polys[k]
        nxt[: k + 1] -= a[k] * polys[k]
        nxt[:k] -= beta[k - 1] * polys[k - 1]
        polys.append(nxt / beta[k])
    return polys
