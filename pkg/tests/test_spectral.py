from fractions import Fraction
from math import comb

import numpy as np
import pytest
from scipy.optimize import brentq

from johnson_pst.errors import DegeneracyError, DomainError, NumericalFailure, PoleProximityError
from johnson_pst.graph import IntersectionArray, build_johnson, distance_matrices, intersection_numbers
from johnson_pst.spectral import (
    QDParameters,
    SpectralMeasure,
    eigenmatrix,
    eigenvalue_support,
    eval_polys,
    gauss_weights,
    jacobi_matrix,
    johnson_qd,
    partial_fraction_value,
    qd_from_intersection,
    spectral_measure,
    stieltjes_value,
)

F = Fraction


def closed_form_support(m):
    return [m * m - k * (2 * m + 1 - k) for k in range(m + 1)]


# ------------------------------------------------------------------
# QD parameters
# ------------------------------------------------------------------

@pytest.mark.parametrize(
    "b,c,kappa,alpha,omega",
    [
        ((4, 1), (1, 4), 4, (0, 2, 0), (4, 4)),
        ((1,), (1,), 1, (0, 0), (1,)),
        ((9, 4, 1), (1, 4, 9), 9, (0, 4, 4, 0), (9, 16, 9)),
    ],
)
def test_qd_from_intersection(b, c, kappa, alpha, omega):
    qd = qd_from_intersection(IntersectionArray(b, c), kappa)
    assert qd.alpha == alpha and qd.omega == omega


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_johnson_qd_matches_brute_force_graph(m):
    g = build_johnson(2 * m, m)
    qd = qd_from_intersection(intersection_numbers(g), g.degree, exact=True)
    assert qd == johnson_qd(m, exact=True)


def test_johnson_qd_small():
    assert johnson_qd(2).alpha == (0, 2, 0) and johnson_qd(2).omega == (4, 4)
    assert johnson_qd(1).alpha == (0, 0) and johnson_qd(1).omega == (1,)
    assert johnson_qd(3).alpha == (0, 4, 4, 0) and johnson_qd(3).omega == (9, 16, 9)


def test_qd_validation():
    with pytest.raises(DomainError):
        qd_from_intersection(IntersectionArray((2, 0), (1, 1)), 2)
    with pytest.raises(DomainError):
        QDParameters((1.0, 0.0), (1.0,))
    with pytest.raises(DomainError):
        johnson_qd(0)


# ------------------------------------------------------------------
# polynomials
# ------------------------------------------------------------------

@pytest.mark.parametrize("x", [-3, -2, -1, 0, 1, 2, 4, 5])
def test_m2_polynomials_at_integers(x):
    pv = eval_polys(johnson_qd(2, exact=True), x)
    assert pv.Q[3] == x * (x - 4) * (x + 2)
    assert pv.Q1[2] == x * x - 2 * x - 4
    assert pv.P[2] == F(x * x - 2 * x - 4, 4)
    assert pv.dQ == 3 * x * x - 4 * x - 8


@pytest.mark.parametrize("x,expected", [(4, (1, 2, 1)), (0, (1, 0, -1)), (-2, (1, -1, 1))])
def test_m2_orthonormal_values(x, expected):
    assert eval_polys(johnson_qd(2, exact=True), x).P == expected
    assert np.allclose(eval_polys(johnson_qd(2), x).P, expected, atol=1e-15)


def test_odd_polynomials_vanish_for_symmetric_recurrence():
    qd = QDParameters((0.0,) * 6, (1.0, 2.0, 3.0, 4.0, 5.0))
    pv = eval_polys(qd, 0.0)
    assert all(pv.Q[k] == 0 for k in range(1, len(pv.Q), 2))


def test_derivative_recurrence_against_finite_difference():
    qd = johnson_qd(5)
    h = 1e-6
    for x in (-4.3, 0.7, 11.2):
        fd = (eval_polys(qd, x + h).Q[-1] - eval_polys(qd, x - h).Q[-1]) / (2 * h)
        assert eval_polys(qd, x).dQ == pytest.approx(fd, rel=1e-7)


# ------------------------------------------------------------------
# support
# ------------------------------------------------------------------

@pytest.mark.parametrize("m,expected", [(2, (4, 0, -2)), (3, (9, 3, -1, -3)), (1, (1, -1))])
def test_support_examples(m, expected):
    assert np.allclose(eigenvalue_support(johnson_qd(m)), expected, atol=1e-12)
    assert eigenvalue_support(johnson_qd(m, exact=True)) == expected


@pytest.mark.parametrize("m", range(1, 9))
def test_support_exact_closed_form(m):
    assert list(eigenvalue_support(johnson_qd(m, exact=True))) == closed_form_support(m)


def _roots_by_sign_change(qd):
    """Bracket the roots of Q_{d+1} on a shifted grid and polish with brentq."""
    radius = 1 + max(abs(a) for a in qd.alpha) + 2 * max(np.sqrt(qd.omega))
    grid = np.linspace(-radius, radius, 40001) + 1e-3 * np.pi
    vals = [eval_polys(qd, x).Q[-1] for x in grid]
    roots = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(brentq(lambda x: eval_polys(qd, x).Q[-1], a, b, xtol=1e-14, rtol=1e-15))
    return sorted(roots, reverse=True)


@pytest.mark.parametrize("m", range(1, 9))
def test_jacobi_equivalence(m):
    qd = johnson_qd(m)
    roots = _roots_by_sign_change(qd)
    assert len(roots) == m + 1
    assert np.max(np.abs(np.array(roots) - eigenvalue_support(qd))) < 1e-10


def test_support_of_generic_qd():
    # Hamming graph H(3,2) (the cube): b = (3,2,1), c = (1,2,3)
    qd = qd_from_intersection(IntersectionArray((3, 2, 1), (1, 2, 3)), 3)
    assert np.allclose(eigenvalue_support(qd), (3, 1, -1, -3), atol=1e-12)
    mu = spectral_measure(qd)
    assert np.allclose(mu.weights, (1 / 8, 3 / 8, 3 / 8, 1 / 8), atol=1e-14)


def test_degenerate_support_rejected(monkeypatch):
    import johnson_pst.spectral as sp

    monkeypatch.setattr(sp, "_jacobi_eigenvalues", lambda qd: np.array([1.0, 1.0 + 1e-12, -2.0]))
    with pytest.raises(DegeneracyError):
        eigenvalue_support(johnson_qd(2))


def test_exact_mode_rejects_irrational_support():
    qd = QDParameters((F(0), F(0)), (F(2),), exact=True)  # roots +-sqrt(2)
    with pytest.raises(NumericalFailure):
        eigenvalue_support(qd)


# ------------------------------------------------------------------
# weights
# ------------------------------------------------------------------

def test_weights_m2_exact():
    mu = spectral_measure(johnson_qd(2, exact=True))
    assert dict(zip(mu.points, mu.weights)) == {4: F(1, 6), 0: F(1, 2), -2: F(1, 3)}


def test_weights_m1():
    assert spectral_measure(johnson_qd(1, exact=True)).weights == (F(1, 2), F(1, 2))
    assert np.allclose(spectral_measure(johnson_qd(1)).weights, (0.5, 0.5), atol=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_weights_equal_eigenspace_fractions(m):
    g = build_johnson(2 * m, m)
    A = distance_matrices(g)[1].astype(float)
    evals = np.linalg.eigvalsh(A)
    mu = spectral_measure(johnson_qd(m, exact=True))
    for x, gamma in zip(mu.points, mu.weights):
        mult = int(np.sum(np.abs(evals - float(x)) < 1e-8))
        assert F(mult, g.N) == gamma


def test_weights_m3_values():
    mu = spectral_measure(johnson_qd(3, exact=True))
    assert mu.weights == (F(1, 20), F(1, 4), F(9, 20), F(1, 4))


def test_weight_sum_failure_is_reported_not_renormalized():
    qd = johnson_qd(2)
    with pytest.raises(NumericalFailure, match="sum to"):
        gauss_weights(qd, (4.0, 0.0, -2.0 + 1e-6))


@pytest.mark.parametrize("m", range(1, 7))
def test_moments_match_matrix_powers(m):
    g = build_johnson(2 * m, m)
    A = distance_matrices(g)[1].astype(float)
    mu = spectral_measure(johnson_qd(m, exact=True))
    v = np.zeros(g.N)
    v[0] = 1.0
    w = v.copy()
    for j in range(2 * m + 1):
        walk = w[0]  # <phi_0|A^j|phi_0>
        moment = float(mu.moment(j))
        assert moment == pytest.approx(walk, rel=1e-9, abs=1e-12)
        w = A @ w


def test_first_moments():
    for m in range(1, 6):
        qd = johnson_qd(m, exact=True)
        mu = spectral_measure(qd)
        assert mu.moment(0) == 1 and mu.moment(1) == 0 and mu.moment(2) == qd.omega[0]


# ------------------------------------------------------------------
# Stieltjes transform
# ------------------------------------------------------------------

def test_stieltjes_m2_at_10():
    qd = johnson_qd(2)
    expected = (1 / 6) / 6 + (1 / 2) / 10 + (1 / 3) / 12
    assert stieltjes_value(qd, 10) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.10555555555555556)


def test_stieltjes_m1_imaginary():
    assert stieltjes_value(johnson_qd(1), 2j) == pytest.approx(-0.4j, abs=1e-15)


@pytest.mark.parametrize("m", [1, 2, 4, 7])
def test_stieltjes_partial_fractions_and_mass(m):
    qd = johnson_qd(m)
    mu = spectral_measure(johnson_qd(m, exact=True))
    for z in (0.5 + 0.3j, -7.1, 3 + 2j, 1e3j):
        assert abs(stieltjes_value(qd, z) - partial_fraction_value(mu, z)) < 1e-10
    assert abs(1e8 * stieltjes_value(qd, 1e8) - 1) < 1e-6


def test_stieltjes_pole_proximity():
    with pytest.raises(PoleProximityError):
        stieltjes_value(johnson_qd(2), 4 + 1e-10)


# ------------------------------------------------------------------
# eigenmatrix
# ------------------------------------------------------------------

def test_eigenmatrix_m2_reference_order():
    qd = johnson_qd(2, exact=True)
    mu = spectral_measure(qd).reordered((0, 4, -2))
    em = eigenmatrix(qd, mu)
    assert em.P.tolist() == [[1, 1, 1], [0, 2, -1], [-1, 1, 1]]
    assert np.diag(em.W).tolist() == [F(1, 2), F(1, 6), F(1, 3)]
    assert em.residual() == 0


def test_eigenmatrix_m1():
    qd = johnson_qd(1, exact=True)
    em = eigenmatrix(qd, spectral_measure(qd))
    assert em.P.tolist() == [[1, 1], [1, -1]]
    assert (em.P @ em.W @ em.P.T).tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("m", range(1, 9))
def test_eigenmatrix_float_orthonormal(m):
    qd = johnson_qd(m)
    em = eigenmatrix(qd, spectral_measure(qd))
    assert em.residual() < 1e-10
    assert np.allclose(em.P[0], 1.0)


@pytest.mark.parametrize("m", range(1, 9))
def test_top_column_and_antipodal_row(m):
    qd = johnson_qd(m)
    em = eigenmatrix(qd, spectral_measure(qd))
    kappa = [comb(m, l) ** 2 for l in range(m + 1)]
    assert np.max(np.abs(em.P[:, 0] - np.sqrt(kappa))) < 1e-10 * max(np.sqrt(kappa))
    assert np.max(np.abs(np.abs(em.P[m]) - 1)) < 1e-10


def test_eigenmatrix_rejects_wrong_weights():
    qd = johnson_qd(2)
    bad = SpectralMeasure((4.0, 0.0, -2.0), (0.2, 0.5, 0.3))
    with pytest.raises(NumericalFailure):
        eigenmatrix(qd, bad)


def test_float_mode_fails_loudly_for_large_m():
    qd = johnson_qd(20)
    with pytest.raises(NumericalFailure):
        eigenmatrix(qd, gauss_weights(qd, eigenvalue_support(qd)))


def test_exact_mode_large_m():
    qd = johnson_qd(30, exact=True)
    em = eigenmatrix(qd, spectral_measure(qd))
    assert em.residual() == 0
    assert all(abs(v) == 1 for v in em.P[30])


def test_jacobi_matrix_spectrum():
    qd = johnson_qd(4)
    assert np.allclose(sorted(np.linalg.eigvalsh(jacobi_matrix(qd)), reverse=True), closed_form_support(4))
