import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from ptwell.charpoly import (
    certify_real,
    char_poly,
    imaginary_defect,
    is_real,
    roots,
    symmetrize_conjugates,
    tridiagonal_roots,
    _aberth,
    _horner_newton,
)
from ptwell.errors import NumericFailure, PTSymmetryBrokenError
from ptwell.model import shifted_well, square_well
from ptwell.secular import block_size, secular_roots


def figure_a(xi):
    # F (-F^6 - F^4 (xi^2 - 6) + F^2 (4 xi^2 - 10) - 3 xi^2 + 4)
    x2 = xi * xi
    return Polynomial([0, 4 - 3 * x2, 0, 4 * x2 - 10, 0, -(x2 - 6), 0, -1])


def figure_b(xi):
    # F (-F^6 - F^4 (2 xi^2 - 6) + F^2 (-xi^4 + 4 xi^2 - 10) + 2 xi^4 + xi^2 + 4)
    x2 = xi * xi
    return Polynomial([0, 2 * x2 * x2 + x2 + 4, 0, -x2 * x2 + 4 * x2 - 10, 0, -(2 * x2 - 6), 0, -1])


def multiset_distance(a, b):
    a, b = np.sort_complex(np.asarray(a)), np.sort_complex(np.asarray(b))
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def test_n4_polynomial():
    for xi in (0.0, 0.7, 2.3):
        p = char_poly(square_well(4).hamiltonian(xi))
        want = Polynomial([0, -(xi * xi - 2), 0, -1])
        assert np.allclose(p.coef, want.coef, rtol=0, atol=1e-14)


@pytest.mark.parametrize("ell,ref", [("5/8", figure_a), ("3/8", figure_b)])
def test_printed_determinants(ell, ref):
    for xi in (0.0, 0.3, 1.1, 4.0):
        got = char_poly(shifted_well(8, ell).hamiltonian(xi)).coef
        want = ref(xi).coef
        assert np.max(np.abs(got - want)) <= 1e-12 * max(1.0, np.max(np.abs(want)))


def test_certify_real():
    p = char_poly(shifted_well(8, "3/8").hamiltonian(0.9))
    assert np.iscomplexobj(p.coef)
    assert not np.iscomplexobj(certify_real(p).coef)
    q = figure_a(0.6)
    assert np.array_equal(certify_real(q).coef, q.coef)
    with pytest.raises(PTSymmetryBrokenError):
        certify_real(Polynomial([1, 1j]))


def test_roots_examples():
    r = roots(Polynomial([0, -(1 - 2), 0, -1])).roots  # xi = 1
    assert np.allclose(r, [-1, 0, 1], atol=1e-14)
    r = roots(figure_a(0.0)).roots
    s2 = np.sqrt(2)
    want = np.sort([0, s2, -s2, np.sqrt(2 + s2), -np.sqrt(2 + s2), np.sqrt(2 - s2), -np.sqrt(2 - s2)])
    assert np.allclose(r, want, rtol=0, atol=1e-12)
    assert roots(Polynomial([3.0, 2.0])).roots == pytest.approx([-1.5])


def test_roots_match_extended_precision():
    # independent oracle: mpmath polyroots at 50 digits
    p = figure_b(0.5)
    with mpmath.workdps(50):
        ref = mpmath.polyroots([mpmath.mpf(c) for c in p.coef[::-1]], maxsteps=200, extraprec=200)
    ref = np.array([complex(z) for z in ref])
    assert multiset_distance(roots(p).roots, ref) <= 1e-12


def test_nonconvergence_reports_best_iterate():
    c = figure_a(0.3).coef
    with pytest.raises(NumericFailure) as info:
        _aberth(_horner_newton(c), np.exp(1j * np.arange(7)), maxiter=2)
    assert info.value.best is not None and info.value.best.size == 7


def test_symmetrize_pairs_only_true_partners():
    z = symmetrize_conjugates(np.array([1 + 1e-3j, 1 - 1e-3j + 1e-12, 0.007 + 5e-13j, 3 + 2j, 3 - 2j]))
    assert z[0] == np.conj(z[1])
    assert z[2] == 0.007
    assert z[3] == np.conj(z[4])


models = st.one_of(
    st.integers(2, 40).map(square_well),
    st.tuples(st.integers(4, 30), st.sampled_from(["1/2", "3/8", "5/8", "1/3"])).map(
        lambda t: shifted_well(*t)
    ),
)


@given(models, st.floats(0, 6))
def test_spectrum_closure(model, xi):
    F = tridiagonal_roots(model.hamiltonian(xi)).roots
    assert F.size == model.dim
    assert multiset_distance(F, F.conj()) <= 1e-9
    assert multiset_distance(F, -F) <= 1e-9


@given(models, st.floats(0, 6))
def test_agrees_with_dense_solver(model, xi):
    F = tridiagonal_roots(model.hamiltonian(xi)).roots
    ref = np.linalg.eigvals(model.hamiltonian(xi).dense())
    # eigenvalue conditioning near exceptional points limits both solvers
    assert multiset_distance(F, ref) <= 1e-6


@given(st.integers(2, 20), st.floats(0, 3))
def test_monomial_route(N, xi):
    H = square_well(N).hamiltonian(xi)
    p = char_poly(H)
    assert imaginary_defect(p) <= 1e-12
    rs = roots(certify_real(p))
    assert multiset_distance(rs.roots, tridiagonal_roots(H).roots) <= 1e-8
    scale = np.max(np.abs(p.coef))
    assert np.all(rs.residuals <= 1e-10 * scale * np.maximum(1, np.abs(rs.roots)) ** N)


@given(st.integers(2, 40))
def test_hermitian_limit(N):
    F = tridiagonal_roots(square_well(N).hamiltonian(0.0)).roots
    want = np.sort(-2 * np.cos(np.arange(1, N) * np.pi / N))
    assert np.max(np.abs(F - want)) <= 1e-10
    assert np.all(F.imag == 0)


@given(st.integers(3, 40), st.floats(0, 1))
def test_real_roots_match_matching_route(N, frac):
    model = square_well(N)
    xi = frac * 0.9 * 2.25 * 4 / N**2  # Z_crit >= 2.25 for every N >= 3
    F = tridiagonal_roots(model.hamiltonian(xi)).roots
    assert np.all(is_real(F))
    n, parity = block_size(N)
    sec = secular_roots(n, xi, parity)
    assert sec.size == F.size
    assert np.max(np.abs(np.sort(F.real) - sec)) <= 1e-8
